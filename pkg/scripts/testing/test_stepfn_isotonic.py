"""Тесты ступенчатых функций, их первообразных и изотонической регрессии."""

import numpy as np
import pytest
from scipy import integrate

from solvers.errors import InputError
from solvers.isotonic import isotonic_fit, weighted_sse
from solvers.stepfn import StepFn


def test_stepfn_is_right_continuous():
    fn = StepFn(np.array([0.0, 1.0]), np.array([2.0, -1.0, 3.0]))
    assert fn(-5.0) == 2.0
    assert fn(0.0) == -1.0
    assert fn.left_limit(0.0) == 2.0
    assert fn(1.0) == 3.0
    assert np.array_equal(fn(np.array([-1.0, 0.5, 2.0])), [2.0, -1.0, 3.0])


def test_stepfn_validation():
    with pytest.raises(InputError):
        StepFn(np.array([1.0, 0.0]), np.array([0.0, 1.0, 2.0]))
    with pytest.raises(InputError):
        StepFn(np.array([0.0]), np.array([1.0]))
    with pytest.raises(InputError):
        StepFn(np.array([0.0]), np.array([1.0, np.nan]))


def test_interval_stepfn_payload():
    fn = StepFn.from_dict({"breakpoints": [0.0, 0.5], "values": [-2.0, -1.0], "domain": [0.0, 1.0]})
    assert fn.domain == (0.0, 1.0)
    assert fn(0.25) == -2.0
    assert fn(0.75) == -1.0
    lo, hi, vals = fn.domain_pieces()
    assert np.array_equal(lo, [0.0, 0.5])
    assert np.array_equal(hi, [0.5, 1.0])
    assert fn.to_dict() == {"breakpoints": [0.0, 0.5], "values": [-2.0, -1.0], "domain": [0.0, 1.0]}
    with pytest.raises(InputError):
        StepFn.from_dict({"breakpoints": [0.2], "values": [1.0], "domain": [0.0, 1.0]})


def test_primitive_is_exact():
    riemann = StepFn(np.array([0.0]), np.array([1.0, -1.0]))
    v0 = riemann.primitive()
    assert v0(0.0) == 0.0
    assert v0(-2.0) == pytest.approx(-2.0)
    assert v0(2.0) == pytest.approx(-2.0)

    fn = StepFn(np.array([-1.0, 1.0, 2.0]), np.array([0.5, 2.0, -1.0, 4.0]))
    xs = np.linspace(-3.0, 4.0, 71)
    fine = np.linspace(0.0, 1.0, 20001)
    for x in xs[::10]:
        grid = fine * x
        numeric = integrate.trapezoid(fn(grid), grid) if x != 0 else 0.0
        assert fn.primitive()(x) == pytest.approx(numeric, abs=2e-3)


def test_total_variation_and_monotonicity():
    fn = StepFn(np.array([0.0, 1.0, 2.0]), np.array([-3.0, -1.0, -2.0, 0.0]))
    assert fn.total_variation() == pytest.approx(5.0)
    assert fn.total_variation(0.5, 2.5) == pytest.approx(3.0)
    assert not fn.is_nondecreasing()
    assert fn.map_values(np.abs).values.tolist() == [3.0, 1.0, 2.0, 0.0]


def test_reflected_and_merged():
    fn = StepFn(np.array([0.0, 1.0]), np.array([1.0, 1.0, 2.0]), (-1.0, 3.0))
    merged = fn.merged()
    assert merged.breakpoints.tolist() == [1.0]
    ref = fn.reflected()
    assert ref.domain == (-3.0, 1.0)
    assert ref(-2.0) == -2.0
    assert ref(0.5) == -1.0


def test_isotonic_pools_violators():
    assert isotonic_fit([3.0, 1.0, 2.0]).tolist() == pytest.approx([2.0, 2.0, 2.0])
    assert isotonic_fit([1.0, 3.0, 2.0, 4.0]).tolist() == pytest.approx([1.0, 2.5, 2.5, 4.0])
    weighted = isotonic_fit([1.0, 3.0, 2.0], weights=[1.0, 1.0, 3.0])
    assert weighted.tolist() == pytest.approx([1.0, 2.25, 2.25])
    dec = isotonic_fit([1.0, 3.0, 2.0], increasing=False)
    assert dec.tolist() == pytest.approx([2.0, 2.0, 2.0])


def test_isotonic_bounds_and_errors():
    fit = isotonic_fit([-5.0, -1.0, 2.0, 1.0], upper=0.0, lower=-2.0)
    assert fit.tolist() == pytest.approx([-2.0, -1.0, 0.0, 0.0])
    assert np.all(np.diff(fit) >= 0)
    with pytest.raises(InputError):
        isotonic_fit([1.0, 2.0], weights=[1.0])
    with pytest.raises(InputError):
        isotonic_fit([1.0, 2.0], weights=[1.0, 0.0])
    with pytest.raises(InputError):
        isotonic_fit([1.0], lower=1.0, upper=0.0)
    assert isotonic_fit([]).size == 0


def test_isotonic_is_optimal_against_random_monotone_candidates():
    rng = np.random.default_rng(5)
    y = rng.normal(size=30)
    w = rng.uniform(0.5, 2.0, size=30)
    fit = isotonic_fit(y, w)
    best = weighted_sse(fit, y, w)
    for _ in range(200):
        cand = np.sort(rng.normal(size=30))
        assert weighted_sse(cand, y, w) >= best - 1e-12
