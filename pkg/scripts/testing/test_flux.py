"""Тесты потоков: значения, двойственность, обратные ветви и отображения h±."""

import math

import numpy as np
import pytest

from solvers.errors import DomainError, InputError
from solvers.flux import ConvexFlux, FluxPair, QuadraticFlux, TabulatedFlux

SQRT2 = math.sqrt(2.0)


def test_eval_and_deriv_examples():
    f, g = QuadraticFlux(0.5), QuadraticFlux(1.0)
    assert f.eval(2.0) == pytest.approx(2.0)
    assert g.eval(0.0) == 0.0
    assert f.eval(-3.0) == pytest.approx(4.5)
    assert f.deriv(2.0) == pytest.approx(2.0)
    assert g.deriv(1.0) == pytest.approx(2.0)
    assert f.deriv(f.theta) == 0.0


def test_dual_examples_and_fenchel_young():
    f, g = QuadraticFlux(0.5), QuadraticFlux(1.0)
    assert f.dual(3.0) == pytest.approx(4.5)
    assert g.dual(2.0) == pytest.approx(1.0)
    h = QuadraticFlux(0.7, -0.3, 0.2)
    assert h.dual(h.deriv(h.theta)) == pytest.approx(-h.min_value)

    rng = np.random.default_rng(3)
    u = rng.uniform(-5, 5, 500)
    p = rng.uniform(-5, 5, 500)
    assert np.all(h(u) + h.dual(p) >= p * u - 1e-8)
    assert np.allclose(h(u) + h.dual(h.deriv(u)), h.deriv(u) * u, atol=1e-8)


def test_dual_grid_maximisation():
    g = QuadraticFlux(1.0)
    us = np.linspace(-10, 10, 200001)
    for p in (-3.0, 0.5, 2.0):
        assert g.dual(p) == pytest.approx(np.max(p * us - g(us)), abs=1e-6)


def test_inv_branch():
    f, g = QuadraticFlux(0.5), QuadraticFlux(1.0)
    assert f.inv_branch("plus", 2.0) == pytest.approx(2.0)
    assert g.inv_branch("minus", 4.0) == pytest.approx(-2.0)
    with pytest.raises(DomainError):
        f.inv_branch("plus", -1.0)
    with pytest.raises(InputError):
        f.inv_branch("sideways", 1.0)
    u = np.linspace(0.0, 4.0, 41)
    assert np.allclose(f.inv_branch("plus", f(u)), u, atol=1e-8)
    assert np.allclose(f.inv_branch("minus", f(-u)), -u, atol=1e-8)


def test_h_maps_closed_forms(quad_pair):
    p = np.linspace(0.0, 10.0, 1001)
    assert np.max(np.abs(quad_pair.h_plus(p) - SQRT2 * p)) <= 1e-10
    assert np.max(np.abs(quad_pair.h_minus(p) + p / SQRT2)) <= 1e-10
    assert quad_pair.h_plus(2.0) == pytest.approx(2.0 * SQRT2)
    assert quad_pair.h_minus(2.0) == pytest.approx(-SQRT2)


def test_h_plus_strictly_increasing_random(g_high_pair):
    rng = np.random.default_rng(11)
    p = np.sort(rng.uniform(g_high_pair.iplus_lo, g_high_pair.iplus_lo + 20.0, 1000))
    assert np.all(np.diff(g_high_pair.h_plus(p)) > 0)


def test_theta_bar_when_g_dominates(g_high_pair):
    tb = g_high_pair.theta_bar
    assert tb == pytest.approx(SQRT2)
    assert g_high_pair.f(tb) == pytest.approx(g_high_pair.g.min_value)
    assert g_high_pair.iplus_lo == pytest.approx(SQRT2)
    assert g_high_pair.h_plus(g_high_pair.iplus_lo) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(DomainError):
        g_high_pair.h_plus(0.5)


def test_h_maps_vanish_at_the_domain_edge(g_high_pair, f_high_pair):
    # f(θ̄) совпадает с минимумом g только с точностью округления
    assert g_high_pair.h_plus(g_high_pair.iplus_lo) == 0.0
    assert f_high_pair.h_minus(f_high_pair.iminus_lo) == 0.0
    p = g_high_pair.iplus_lo + np.array([0.0, 1e-8, 1e-4, 1e-2])
    h = g_high_pair.h_plus(p)
    assert np.all(h >= 0.0)
    assert np.all(np.diff(h) > 0.0)
    assert g_high_pair.g.inv_branch("plus", g_high_pair.g.min_value + 1e-17) == g_high_pair.g.theta


def test_theta_bar_when_f_dominates(f_high_pair):
    tb = f_high_pair.theta_bar
    assert tb == pytest.approx(-1.0)
    assert f_high_pair.g.deriv(tb) <= 0
    assert f_high_pair.iminus_lo == pytest.approx(2.0)
    assert f_high_pair.iplus_lo == 0.0
    assert f_high_pair.check_invariants() == []


def test_h_plus_inv(quad_pair, g_high_pair):
    for pair in (quad_pair, g_high_pair):
        p = np.linspace(pair.iplus_lo, pair.iplus_lo + 5.0, 21)
        assert np.allclose(pair.h_plus_inv(pair.h_plus(p)), p, atol=1e-9)


def test_mirror_swaps_and_reflects(quad_pair):
    m = quad_pair.mirror()
    u = np.linspace(-3, 3, 13)
    assert np.allclose(m.f(u), quad_pair.g(-u))
    assert np.allclose(m.g(u), quad_pair.f(-u))
    mm = m.mirror()
    assert np.allclose(mm.f(u), quad_pair.f(u))
    assert np.allclose(mm.g(u), quad_pair.g(u))


def test_quadratic_invariants():
    assert QuadraticFlux(0.5).check_invariants() == []
    with pytest.raises(InputError):
        QuadraticFlux(-1.0)


def test_tabulated_matches_quadratic():
    u = np.linspace(-4.0, 4.0, 33)
    tab = TabulatedFlux(u, 0.5 * u * u)
    assert tab.theta == pytest.approx(0.0, abs=1e-6)
    assert tab(1.5) == pytest.approx(1.125, abs=1e-2)
    assert tab.deriv(1.0) == pytest.approx(1.0, abs=5e-2)
    assert tab.inv_branch("plus", 2.0) == pytest.approx(2.0, abs=1e-2)
    # за пределами таблицы поток продолжается квадратично
    assert tab(20.0) > 20.0 * float(np.max(np.abs(tab.deriv(u))))
    assert tab.check_invariants() == []


def test_tabulated_rejects_nonconvex_samples():
    with pytest.raises(InputError):
        TabulatedFlux([0, 1, 2, 3, 4], [0, 1, 1.5, 1.6, 3.0])
    with pytest.raises(InputError):
        TabulatedFlux([0, 1, 2], [1, 0, 1])


def test_flux_payloads():
    f = ConvexFlux.from_dict({"kind": "quadratic", "a": 0.5})
    assert isinstance(f, QuadraticFlux)
    pair = FluxPair.from_dict({"f": {"kind": "quadratic", "a": 0.5}, "g": {"kind": "quadratic", "a": 1.0}})
    assert pair.g(1.0) == pytest.approx(1.0)
    with pytest.raises(InputError):
        ConvexFlux.from_dict({"kind": "cubic"})
    with pytest.raises(InputError):
        FluxPair.from_dict({"f": {"kind": "quadratic"}})
