"""Тесты обратного построения начальных данных."""

import math

import numpy as np
import pytest

from solvers import backward
from solvers.backward import BackwardSpec
from solvers.errors import ConvergenceError, DomainError, InputError
from solvers.exterior import ExteriorMap, ExteriorPiece
from solvers.stepfn import StepFn

SQRT2 = math.sqrt(2.0)


def left_feet(rho0: float) -> ExteriorMap:
    """y = ρ(0) на [ρ(0), 0], тождество левее."""
    return ExteriorMap((ExteriorPiece(rho0, 0.0, "const", rho0),))


def sloped_spec(T: float = 1.0) -> BackwardSpec:
    # ρ(x) = −√2(2 − x) на [0, 1]
    return BackwardSpec(T=T, R=1.0, rho=lambda x: -SQRT2 * (2.0 - np.asarray(x, dtype=float)), y=left_feet(-2.0 * SQRT2))


def test_single_fan_example(quad_pair):
    sol = backward.solve_briemann(quad_pair, 1.0, 1.0, -SQRT2, 1.0)
    assert sol.a2 == pytest.approx(2.0)
    assert sol.b2 == pytest.approx(SQRT2)
    assert sol.t2 == pytest.approx(0.5)
    # f(a) = g(b) на обоих концах
    for a, b in ((sol.a1, sol.b1), (sol.a2, sol.b2)):
        assert quad_pair.f(a) == pytest.approx(quad_pair.g(b))


def test_fan_from_the_interface(quad_pair):
    sol = backward.solve_briemann(quad_pair, 0.0, 1.0, -SQRT2, 1.0)
    assert sol.t1 == pytest.approx(1.0)
    assert sol.b1 == pytest.approx(SQRT2 / 2)
    assert sol.a1 == pytest.approx(1.0)
    assert sol.t1 > sol.t2
    with pytest.raises(InputError):
        backward.solve_briemann(quad_pair, 1.0, 0.5, -SQRT2, 1.0)
    with pytest.raises(InputError):
        backward.solve_briemann(quad_pair, 0.0, 1.0, 0.5, 1.0)


def test_tmap_closed_form(quad_pair):
    x = np.linspace(0.05, 2.0, 40)
    for rho in (-0.5, -SQRT2, -3.0):
        t = backward.tmap_array(quad_pair, x, np.full_like(x, rho), 1.0)
        assert np.allclose(t, -rho / (SQRT2 * x - rho), atol=1e-10)
    assert backward.solve_tmap(quad_pair, 1.0, -SQRT2, 1.0) == pytest.approx(0.5, abs=1e-10)
    with pytest.raises(DomainError):
        backward.solve_tmap(quad_pair, 0.0, -1.0, 1.0)
    with pytest.raises(DomainError):
        backward.tmap_array(quad_pair, [1.0], [0.5], 1.0)


def test_tmap_array_mixes_edges_with_interior_samples(quad_pair):
    x = np.array([0.0, 1.0, 0.5, 2.0])
    rho = np.array([-1.0, -SQRT2, 0.0, -3.0])
    t = backward.tmap_array(quad_pair, x, rho, 1.0)
    # x = 0: t = T, так как h₊(0) = 0; ρ = 0: нижний конец скобки, здесь 0
    assert t[0] == 1.0
    assert t[2] == 0.0
    assert t[1] == pytest.approx(0.5, abs=1e-10)
    assert t[3] == pytest.approx(3.0 / (2.0 * SQRT2 + 3.0), abs=1e-10)

    grid = backward.tmap_array(quad_pair, x.reshape(2, 2), rho.reshape(2, 2), 1.0)
    assert grid.shape == (2, 2)
    assert np.allclose(grid.ravel(), t, atol=1e-12)

    pair_at_zero = backward.tmap_array(quad_pair, [0.0, 1.0], [-1.0, -1.0], 1.0)
    assert pair_at_zero == pytest.approx([1.0, 1.0 / (SQRT2 + 1.0)], abs=1e-10)


def test_bridging_shock_stays_in_its_window(quad_pair):
    T, x0 = 1.0, 0.5
    t1 = backward.solve_tmap(quad_pair, x0, -2.0, T)
    t2 = backward.solve_tmap(quad_pair, x0, -1.5, T)
    shock = backward.bridge_shock(quad_pair, x0, t1, t2, -2.0, -1.5, T)
    assert t2 <= shock.t3 <= t1
    assert -2.0 <= shock.rho3 <= -1.5
    # g-ударная волна из ρ3 приходит на интерфейс в момент t3
    assert -shock.rho3 / shock.s1 == pytest.approx(shock.t3)
    with pytest.raises(InputError):
        backward.bridge_shock(quad_pair, x0, t2, t1, -2.0, -1.5, T)


def test_closed_form_worked_examples(quad_pair):
    assert backward.solve_tmap(quad_pair, 1.0, -2.0 * SQRT2, 1.0) == pytest.approx(2.0 / 3.0, abs=1e-10)
    fan = backward.solve_briemann(quad_pair, 1.0, 2.0, -SQRT2, 1.0)
    assert (fan.a1, fan.b1, fan.t1) == pytest.approx((2.0, SQRT2, 0.5))
    assert (fan.a2, fan.b2, fan.t2) == pytest.approx((3.0, 3.0 / SQRT2, 1.0 / 3.0))

    shock = backward.bridge_shock(quad_pair, 1.0, 2.0 / 3.0, 0.5, -2.0 * SQRT2, -SQRT2, 1.0)
    assert shock.s2 == pytest.approx(2.5)
    assert shock.t3 == pytest.approx(0.6)
    assert shock.s1 == pytest.approx(5.0 / SQRT2)
    assert shock.rho3 == pytest.approx(-3.0 / SQRT2)


def test_two_level_rho_has_one_seed(quad_pair):
    rho = StepFn(np.array([0.5]), np.array([-2.0 * SQRT2, -SQRT2]), (0.0, 1.0))
    spec = BackwardSpec(T=1.0, R=1.0, rho=rho, y=left_feet(-2.0 * SQRT2))
    plan = backward.construct(spec, quad_pair, N=1)
    assert plan.n_levels == 2
    assert plan.seeds.size == 1
    assert -2.0 * SQRT2 <= plan.seeds[0] <= -SQRT2
    assert plan.rh_residual() <= 1e-10
    assert plan.tmap_decreasing()


def test_constant_rho_plan(quad_pair):
    spec = BackwardSpec(T=1.0, R=1.0, rho=StepFn.constant(-SQRT2), y=left_feet(-SQRT2))
    plan = backward.construct(spec, quad_pair, N=1)
    assert plan.n_levels == 1
    assert plan.side == "plus"
    assert plan.rh_residual() <= 1e-12
    assert plan.tmap_decreasing()
    # веер g-стороны из −√2 от 0 до √2, справа от интерфейса θ_f
    assert plan.u0(-2.0) == 0.0
    assert plan.u0(-1.0) == pytest.approx(SQRT2)
    assert plan.u0(0.5) == 0.0
    assert plan.tmap(np.array([0.0, 1.0])) == pytest.approx([1.0, 0.5])


def test_constant_rho_round_trip(quad_pair):
    spec = BackwardSpec(T=1.0, R=1.0, rho=StepFn.constant(-SQRT2), y=left_feet(-SQRT2))
    plan = backward.construct(spec, quad_pair, N=1)
    # профиль на блоке: u(x, 1) = 1 + x
    assert backward.ideal_profile(spec, quad_pair, np.array([0.25, 0.5])) == pytest.approx([1.25, 1.5])
    assert backward.round_trip_error(plan, nx=101) <= 1e-4


def test_sloped_rho_round_trip_improves_with_N(quad_pair):
    spec = sloped_spec()
    coarse = backward.construct(spec, quad_pair, N=1)
    fine = backward.construct(spec, quad_pair, N=16)
    assert fine.n_levels > coarse.n_levels
    assert fine.rh_residual() <= 1e-10
    assert fine.tmap_decreasing()
    e_coarse = backward.round_trip_error(coarse, nx=101)
    e_fine = backward.round_trip_error(fine, nx=101)
    assert e_fine <= e_coarse
    assert e_fine <= 0.05


def test_bv_bound_holds(quad_pair):
    for N in (2, 8):
        plan = backward.construct(sloped_spec(), quad_pair, N=N)
        assert plan.total_variation() <= plan.bv_bound()


def test_minus_case_is_the_mirror_image(quad_pair):
    spec = BackwardSpec(T=1.0, R=1.0, rho=StepFn.constant(-SQRT2), y=left_feet(-SQRT2))
    plus = backward.construct(spec, quad_pair, N=1)
    minus = backward.construct(spec.mirror(), quad_pair.mirror(), N=1)
    assert minus.side == "minus"
    ref = plus.u0.reflected()
    assert np.allclose(minus.u0.breakpoints, ref.breakpoints)
    assert np.allclose(minus.u0.values, ref.values)


def test_inconsistent_spec_is_rejected(quad_pair):
    # тождественное y на x < 0 выше ρ(0) < 0
    spec = BackwardSpec(T=1.0, R=1.0, rho=StepFn.constant(-SQRT2))
    with pytest.raises(InputError):
        backward.construct(spec, quad_pair)
    rising = BackwardSpec(T=1.0, R=1.0, rho=lambda x: 1.0 - 3.0 * np.asarray(x), y=left_feet(-3.0))
    with pytest.raises(InputError):
        backward.construct(rising, quad_pair)
    with pytest.raises(InputError):
        backward.construct(spec, quad_pair, N=0)


def test_refine_stops_at_the_target(quad_pair):
    plan = backward.refine(sloped_spec(), quad_pair, target_l1=0.05, N0=4, nx=101)
    assert plan.history
    assert plan.history[-1][1] <= 0.05
    with pytest.raises(ConvergenceError):
        backward.refine(sloped_spec(), quad_pair, target_l1=1e-12, N0=1, n_max=2, nx=51)


def test_spec_payload():
    spec = BackwardSpec.from_dict({"T": 1.0, "R": 1.0, "rho": {"at0": -2.0, "slope": 0.5}})
    assert spec.rho_at(1.0) == pytest.approx(-1.5)
    assert spec.side == "plus"
    assert BackwardSpec.from_dict({"T": 1.0, "R": -1.0, "rho": {"at0": 1.0, "slope": 0.0}}).side == "minus"
    with pytest.raises(InputError):
        BackwardSpec.from_dict({"T": 1.0, "R": 1.0})


def test_tmap_random_instances_match_closed_form(quad_pair, rng):
    x = rng.uniform(0.05, 2.0, 1000)
    rho = rng.uniform(-3.0, -0.05, 1000)
    T = rng.uniform(0.5, 2.0, 1000)
    t = np.array([backward.solve_tmap(quad_pair, xi, ri, Ti) for xi, ri, Ti in zip(x, rho, T)])
    assert np.max(np.abs(t - (-rho * T / (SQRT2 * x - rho)))) <= 1e-9

    xs = np.linspace(0.01, 3.0, 200)
    for rho_i, T_i in zip(rng.uniform(-3.0, -0.05, 20), rng.uniform(0.5, 2.0, 20)):
        ts = backward.tmap_array(quad_pair, xs, np.full_like(xs, rho_i), T_i)
        assert np.all(np.diff(ts) < 0)


@pytest.mark.parametrize("pair_name", ["quad_pair", "g_high_pair"])
def test_briemann_random_instances_satisfy_the_fan_equations(request, pair_name, rng):
    pair = request.getfixturevalue(pair_name)
    for _ in range(100):
        x1 = rng.uniform(0.0, 2.0)
        x2 = x1 + rng.uniform(0.0, 1.0)
        rho0, T = rng.uniform(-3.0, -0.1), rng.uniform(0.5, 2.0)
        sol = backward.solve_briemann(pair, x1, x2, rho0, T)
        for x, a, b, t in ((x1, sol.a1, sol.b1, sol.t1), (x2, sol.a2, sol.b2, sol.t2)):
            gb = float(pair.g.deriv(b))
            assert abs(float(pair.f(a)) - float(pair.g(b))) <= 1e-9
            assert abs(float(pair.f.deriv(a)) * (T + rho0 / gb) - x) <= 1e-9
            assert abs(t + rho0 / gb) <= 1e-9
            assert 0.0 < t <= T
        assert sol.t2 <= sol.t1


def test_random_monotone_specs_round_trip(quad_pair, rng):
    for _ in range(20):
        # ρ(x) = a + b·x < 0 на [0, R], ступень y = ρ(0) слева
        a, b = rng.uniform(-3.0, -1.0), rng.uniform(0.2, 1.0)
        R, T = rng.uniform(0.5, 1.0), rng.uniform(1.0, 2.0)
        spec = BackwardSpec(T=T, R=R, rho=lambda x, a=a, b=b: a + b * np.asarray(x, dtype=float), y=left_feet(a))
        coarse = backward.construct(spec, quad_pair, N=32)
        fine = backward.construct(spec, quad_pair, N=64)
        assert fine.tmap_decreasing()
        assert fine.total_variation() <= fine.bv_bound()
        e_coarse = backward.round_trip_error(coarse, nx=201)
        e_fine = backward.round_trip_error(fine, nx=201)
        assert e_fine <= 1e-2
        assert e_fine <= e_coarse


def test_round_trip_error_shrinks_under_doubling(quad_pair):
    errors = [backward.round_trip_error(backward.construct(sloped_spec(), quad_pair, N=N), nx=401) for N in (4, 8, 16, 32)]
    ratios = np.array(errors[1:]) / np.array(errors[:-1])
    assert np.all(ratios <= 0.7), errors
