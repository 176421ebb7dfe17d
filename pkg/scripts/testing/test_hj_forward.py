"""Тесты прямого решателя через функцию цены уравнения Гамильтона–Якоби."""

import math

import numpy as np
import pytest

from solvers import hj_forward
from solvers.errors import InputError
from solvers.hj_forward import GridSpec, SolutionField
from solvers.stepfn import StepFn

SQRT2 = math.sqrt(2.0)


def riemann(left: float, right: float) -> StepFn:
    return StepFn(np.array([0.0]), np.array([left, right]))


def test_stationary_state_stays_put(quad_pair):
    grid = GridSpec(-1.0, 1.0, 41, nt=5)
    sol = hj_forward.solve_profile(StepFn.constant(0.0), quad_pair, 1.0, grid)
    assert np.max(np.abs(sol.u)) <= 1e-9
    assert np.all(sol.R1 == 0.0)
    assert np.all(sol.L1 == 0.0)
    report = hj_forward.check_interface(sol)
    assert report.rh_violation_measure == 0.0
    assert report.entropy_violation_measure == 0.0


def test_burgers_shock_without_flux_jump(same_pair):
    grid = GridSpec(-1.0, 1.5, 51, nt=4)
    sol = hj_forward.solve_profile(riemann(1.0, 0.0), same_pair, 1.0, grid)
    x = sol.x_grid
    left, right = x < 0.45, x > 0.55
    assert np.allclose(sol.u[left], 1.0, atol=1e-6)
    assert np.allclose(sol.u[right], 0.0, atol=1e-6)
    assert sol.R1_T == pytest.approx(0.5, abs=1e-6)
    assert sol.L1_T == 0.0


def test_rarefaction_matches_classical_formula(same_pair):
    T = 1.0
    grid = GridSpec(-2.0, 2.0, 81, nt=3)
    sol = hj_forward.solve_profile(riemann(-1.0, 1.0), same_pair, T, grid)
    # классическая формула Лакса–Олейника для центрированной волны разрежения
    expected = np.clip(sol.x_grid / T, -1.0, 1.0)
    assert np.max(np.abs(sol.u - expected)) <= 1e-6
    assert np.all(sol.R1 == 0.0) and np.all(sol.L1 == 0.0)


def test_interface_block_for_riemann_data(quad_pair):
    grid = GridSpec(-1.0, 1.5, 101, nt=8)
    sol = hj_forward.solve_profile(riemann(1.0, 0.0), quad_pair, 1.0, grid)
    # f(√2) = g(1): состояние √2 справа от интерфейса, ударная волна со скоростью 1/√2
    assert sol.u_at(0.3) == pytest.approx(SQRT2, abs=1e-6)
    assert sol.u_at(-0.5) == pytest.approx(1.0, abs=1e-6)
    assert sol.u_at(1.2) == pytest.approx(0.0, abs=1e-6)
    assert np.allclose(sol.R1, sol.t_grid / SQRT2, atol=1e-6)
    assert np.all(sol.L1 == 0.0)
    assert np.allclose(sol.trace_plus, SQRT2, atol=1e-6)
    assert np.allclose(sol.trace_minus, 1.0, atol=1e-6)

    report = hj_forward.check_interface(sol)
    assert report.rh_violation_measure == 0.0
    assert report.entropy_violation_measure == 0.0
    assert report.n_samples == 8


def test_tmap_on_the_block_decreases(quad_pair):
    grid = GridSpec(0.0, 1.0, 41, nt=2)
    sol = hj_forward.solve_profile(riemann(1.0, 0.0), quad_pair, 1.0, grid)
    block = np.isfinite(sol.tmap_plus)
    assert np.count_nonzero(block) > 10
    # t+(x) = T − x/√2 внутри блока
    xb = sol.x_grid[block]
    assert np.allclose(sol.tmap_plus[block], 1.0 - xb / SQRT2, atol=1e-6)
    assert hj_forward.tmap_monotonicity_violations(sol) == 0
    assert np.all(np.isnan(sol.y[block]))


def test_free_boundaries_are_never_both_nonzero(quad_pair, g_high_pair):
    for pair in (quad_pair, g_high_pair):
        grid = GridSpec(-1.5, 1.5, 61, nt=6)
        sol = hj_forward.solve_profile(riemann(1.0, -1.0), pair, 1.0, grid)
        both = (sol.R1 > 0) & (sol.L1 < 0)
        assert not np.any(both)


def test_corrupted_trace_gives_full_violation(quad_pair):
    nt = 10
    t = np.arange(1, nt + 1) / nt
    zeros = np.zeros(nt)
    sol = SolutionField(
        T=1.0,
        x_grid=np.linspace(-1, 1, 5),
        u=np.zeros(5),
        t_grid=t,
        R1=zeros,
        L1=zeros,
        trace_plus=np.ones(nt),
        trace_minus=zeros,
        tmap_plus=np.full(5, np.nan),
        tmap_minus=np.full(5, np.nan),
        y=np.zeros(5),
        pair=quad_pair,
    )
    # f(1) = 1/2, g(0) = 0 на каждом шаге по времени
    report = hj_forward.check_interface(sol)
    assert report.rh_violation_measure == pytest.approx(1.0)


def test_value_and_control_curves(quad_pair):
    prim = riemann(1.0, 0.0).primitive()
    x, t = 0.3, 1.0
    cost, curve = hj_forward.value(prim, quad_pair, x, t)
    s2 = t - x / SQRT2
    assert cost == pytest.approx(SQRT2 * x - t, abs=1e-8)
    assert curve.kind == "cb"
    assert curve.n_segments == 2
    assert curve.foot == pytest.approx(-2.0 * s2, abs=1e-5)

    cost, curve = hj_forward.value(prim, quad_pair, -0.5, t)
    assert cost == pytest.approx(-1.5, abs=1e-8)
    assert curve.kind == "c0"
    assert curve.foot == pytest.approx(-2.5, abs=1e-8)

    with pytest.raises(InputError):
        hj_forward.value(prim, quad_pair, 0.1, 0.0)


def test_callable_initial_data_matches_stepfn(same_pair):
    grid = GridSpec(-1.0, 1.0, 21, nt=2)
    step = riemann(-1.0, 1.0)
    exact = hj_forward.solve_profile(step, same_pair, 1.0, grid)
    approx = hj_forward.solve_profile(lambda x: np.where(np.asarray(x) < 0, -1.0, 1.0), same_pair, 1.0, grid)
    assert np.max(np.abs(exact.u - approx.u)) <= 5e-3


def test_inputs_are_validated(quad_pair):
    with pytest.raises(InputError):
        GridSpec(1.0, -1.0, 10)
    with pytest.raises(InputError):
        GridSpec.from_dict({"x_min": 0})
    with pytest.raises(InputError):
        hj_forward.solve_profile(StepFn.constant(0.0), quad_pair, 0.0, GridSpec(-1, 1, 5))


def test_l1_distance_on_a_window():
    x = np.linspace(0.0, 2.0, 201)
    assert hj_forward.l1_distance(x, np.ones_like(x), np.zeros_like(x)) == pytest.approx(2.0)
    assert hj_forward.l1_distance(x, np.ones_like(x), np.zeros_like(x), 0.5, 1.0) == pytest.approx(0.5, abs=0.011)
    assert hj_forward.l1_distance(x, x, x) == 0.0


def lax_oleinik(u0: StepFn, x: np.ndarray, T: float) -> np.ndarray:
    """Классическая формула для f = u²/2: перебор подножий по сетке с шагом 1e-4."""
    y = np.linspace(-4.0, 4.0, 80001)
    dy = y[1] - y[0]
    U = np.concatenate([[0.0], np.cumsum(u0(0.5 * (y[:-1] + y[1:])) * dy)])
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        j = int(np.argmin(U + (xi - y) ** 2 / (2.0 * T)))
        out[i] = (xi - y[j]) / T
    return out


def test_single_flux_matches_lax_oleinik_on_random_steps(same_pair, rng):
    grid = GridSpec(-1.5, 1.5, 301, nt=1)
    for _ in range(5):
        # разрывы на узлах 0.05, чтобы сетка подножий их содержала
        bp = np.sort(rng.choice(np.arange(-20, 21), size=4, replace=False)) * 0.05
        u0 = StepFn(bp, rng.uniform(-1.0, 1.0, size=5))
        sol = hj_forward.solve_profile(u0, same_pair, 1.0, grid)
        ref = lax_oleinik(u0, sol.x_grid, 1.0)
        assert hj_forward.l1_distance(sol.x_grid, sol.u, ref) <= 1e-3
