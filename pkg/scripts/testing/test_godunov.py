"""Тесты схемы Годунова, используемой как независимый эталон."""

import math

import numpy as np
import pytest

from solvers import godunov, hj_forward
from solvers.errors import InputError
from solvers.stepfn import StepFn


def riemann(left: float, right: float) -> StepFn:
    return StepFn(np.array([0.0]), np.array([left, right]))


def test_burgers_shock_position(same_pair):
    dx = 0.01
    prof = godunov.run(riemann(1.0, 0.0), same_pair, 1.0, dx)
    crossing = prof.x[np.argmax(prof.u < 0.5)]
    assert abs(crossing - 0.5) <= 2 * dx
    assert np.allclose(prof.u[prof.x < 0.4], 1.0)
    assert np.allclose(prof.u[prof.x > 0.6], 0.0)


def test_stationary_profile_is_unchanged(quad_pair):
    prof = godunov.run(StepFn.constant(0.0), quad_pair, 1.0, 0.05)
    assert np.all(prof.u == 0.0)
    assert prof.steps == 1


def test_interface_face_matches_coupled_flux(quad_pair):
    # g-состояние 1 переходит в f-состояние √2: f(√2) = g(1)
    assert godunov.interface_flux(quad_pair, 1.0, 0.0) == pytest.approx(1.0)
    assert godunov.interface_flux(quad_pair, -1.0, 1.0) == pytest.approx(0.0)
    assert godunov.godunov_flux(quad_pair.f, np.array([-1.0]), np.array([1.0]))[0] == pytest.approx(0.0)
    assert godunov.godunov_flux(quad_pair.f, np.array([2.0]), np.array([1.0]))[0] == pytest.approx(2.0)


def test_agrees_with_value_function_solver(quad_pair):
    u0 = riemann(1.0, 0.0)
    prof = godunov.run(u0, quad_pair, 1.0, 0.005, x_min=-2.0, x_max=2.0)
    grid = hj_forward.GridSpec(-1.5, 1.5, 121, nt=1)
    sol = hj_forward.solve_profile(u0, quad_pair, 1.0, grid)
    dist = hj_forward.l1_distance(sol.x_grid, sol.u, prof.u_at(sol.x_grid))
    assert dist <= 0.05
    # след справа от интерфейса: f(u) = g(1)
    k = np.searchsorted(prof.x, 0.0)
    assert prof.u[k + 5] == pytest.approx(math.sqrt(2.0), abs=1e-2)


def test_snapshots_and_frame(same_pair):
    prof = godunov.run(riemann(1.0, 0.0), same_pair, 1.0, 0.05, snapshot_times=(0.5,))
    assert list(prof.snapshots) == [0.5]
    frame = prof.to_frame()
    assert list(frame.columns) == ["x", "u"]
    assert len(frame) == prof.x.size


def test_invalid_parameters(quad_pair):
    with pytest.raises(InputError):
        godunov.run(StepFn.constant(0.0), quad_pair, 1.0, 0.0)
    with pytest.raises(InputError):
        godunov.run(StepFn.constant(0.0), quad_pair, 1.0, 0.1, x_min=0.5, x_max=2.0)
    with pytest.raises(InputError):
        godunov.run(StepFn.constant(0.0), quad_pair, 1.0, 0.1, cfl=1.5)


# Набор задач Римана (u слева, u справа) для сверки двух решателей
RIEMANN_SUITE = [
    (1.0, 0.0),
    (0.0, 1.0),
    (-1.0, 1.0),
    (1.0, -1.0),
    (1.5, 0.5),
    (-0.5, -1.5),
    (-1.0, 0.5),
    (0.5, -1.0),
]


@pytest.mark.parametrize("pair_name", ["g_high_pair", "f_high_pair"])
@pytest.mark.parametrize("left,right", RIEMANN_SUITE)
def test_riemann_suite_agrees_with_value_function_solver(request, pair_name, left, right):
    pair = request.getfixturevalue(pair_name)
    u0 = riemann(left, right)
    prof = godunov.run(u0, pair, 1.0, 1e-3, x_min=-3.0, x_max=3.0)
    sol = hj_forward.solve_profile(u0, pair, 1.0, hj_forward.GridSpec(-2.0, 2.0, 801, nt=10))
    assert hj_forward.l1_distance(sol.x_grid, sol.u, prof.u_at(sol.x_grid)) <= 0.05

    # законы на интерфейсе: поток непрерывен, веера из интерфейса нет
    report = hj_forward.check_interface(sol, tol=1e-5)
    assert report.rh_violation_measure <= 2 * report.dt
    assert report.entropy_violation_measure <= 2 * report.dt
    assert hj_forward.tmap_monotonicity_violations(sol) == 0
