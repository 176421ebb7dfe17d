"""
Backward construction of initial data that reaches a prescribed profile at time T.

Plus case (R ≥ 0): on (0, R) the target is f'(u) = x/(T − t(x)) with
−ρ(x)/t(x) = h₊(x/(T − t(x))); outside it is the single-flux profile of the feet y.
ρ is discretised into levels z_1 < ... < z_K (each a centred g-side fan feeding the
interface) joined by bridging shocks; the exterior comes from y. The minus case is the
plus case of the mirrored problem.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from solvers import hj_forward
from solvers.errors import ConvergenceError, DomainError, InputError, SolveError
from solvers.exterior import ExteriorMap, exterior_transitions, stepfn_from_transitions
from solvers.flux import FluxPair
from solvers.rootfind import DEFAULT_TOL, bisect_array, bisect_scalar
from solvers.stepfn import StepFn

logger = logging.getLogger(__name__)

RhoLike = Union[StepFn, Callable[[np.ndarray], np.ndarray]]

N_MAX = 2**14
_LEVEL_CLAMP = 1e-9
_T_EDGE = 1e-14


# --- t-map ------------------------------------------------------------------------------------


def tmap_lower(pair: FluxPair, x, T: float):
    lo = pair.iplus_lo
    x = np.asarray(x, dtype=float)
    if lo <= 0:
        return np.zeros_like(x)
    return np.maximum(T - x / lo, 0.0)


def tmap_array(pair: FluxPair, x, rho, T: float) -> np.ndarray:
    """
    Elementwise t(x) with −ρ/t = h₊(x/(T − t)), extended to the edges:
    ρ = 0 gives the lower end of the bracket, x = 0 gives min(T, −ρ/h₊(0)).
    """
    x, rho = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(rho, dtype=float))
    x, rho = x.astype(float), rho.astype(float)
    if np.any(x < 0) or np.any(rho > 0):
        raise DomainError("t-map needs x >= 0 and rho <= 0")
    lo = tmap_lower(pair, x, T)
    hi = np.full_like(x, T * (1.0 - _T_EDGE))
    p_lo = pair.iplus_lo

    inner = (x > 0) & (rho < 0)
    out = np.where(rho == 0, lo, T).astype(float)
    if np.any(inner):
        xi, ri = x[inner], rho[inner]

        def residual(t):
            p = np.maximum(xi / np.maximum(T - t, 1e-300), p_lo)
            return -ri / np.maximum(t, 1e-300) - pair.h_plus(p)

        out[inner] = bisect_array(residual, np.maximum(lo[inner], 1e-300), hi[inner], tol=DEFAULT_TOL * T)
    at_zero = (x == 0) & (rho < 0)
    if np.any(at_zero):
        h0 = float(pair.h_plus(max(p_lo, 0.0))) if p_lo <= 0 else 0.0
        t0 = np.where(h0 > 0, -rho[at_zero] / max(h0, 1e-300), T)
        out[at_zero] = np.minimum(t0, T)
    return out


def solve_tmap(pair: FluxPair, x: float, rho_x: float, T: float) -> float:
    """The unique t in (0, T) with −ρ/t = h₊(x/(T − t)); F(t) is strictly decreasing."""
    if not x > 0 or not rho_x < 0:
        raise DomainError("solve_tmap needs x > 0 and rho < 0", x=x, rho=rho_x)
    if not T > 0:
        raise DomainError("solve_tmap needs T > 0", T=T)
    lo = float(tmap_lower(pair, x, T))
    hi = T * (1.0 - _T_EDGE)
    if lo >= hi:
        raise DomainError("h_plus domain empty over the t bracket", x=x, rho=rho_x, T=T)

    def residual(t: float) -> float:
        p = max(x / (T - t), pair.iplus_lo)
        return -rho_x / t - float(pair.h_plus(p))

    return bisect_scalar(residual, max(lo, 1e-300), hi, tol=DEFAULT_TOL * T)


# --- Riemann fans and bridging shocks -----------------------------------------------------------


@dataclass(frozen=True)
class BriemannSolution:
    a1: float
    a2: float
    b1: float
    b2: float
    t1: float
    t2: float


def _fan_lower_b(pair: FluxPair, rho0: float, T: float) -> float:
    b_T = float(pair.g.deriv_inv(-rho0 / T))
    if pair.f.min_value > pair.g.min_value:
        return max(b_T, float(pair.g.inv_branch("plus", pair.f.min_value)))
    return b_T


def _fan_state(pair: FluxPair, x: float, rho0: float, T: float) -> Tuple[float, float, float]:
    lo = _fan_lower_b(pair, rho0, T)
    if x <= 0:
        b = lo
    else:
        def s1(b: float) -> float:
            a = pair.f.inv_branch_clamped("plus", pair.g(b))
            return float(pair.f.deriv(a)) * (T + rho0 / float(pair.g.deriv(b))) - x

        b = bisect_scalar(s1, lo, lo + max(1.0, abs(lo)), tol=DEFAULT_TOL * max(1.0, abs(lo)))
    a = float(pair.f.inv_branch_clamped("plus", pair.g(b)))
    t = min(-rho0 / float(pair.g.deriv(b)), T)
    return a, b, t


def solve_briemann(pair: FluxPair, x1: float, x2: float, rho0: float, T: float) -> BriemannSolution:
    """
    States (a_i, b_i) and interface times t_i of the fan at ρ0 reaching x1 and x2 at T:
    x_i = f'(a_i)(T + ρ0/g'(b_i)), f(a_i) = g(b_i), t_i = −ρ0/g'(b_i).
    """
    if not 0 <= x1 <= x2:
        raise InputError("solve_briemann needs 0 <= x1 <= x2", x1=x1, x2=x2)
    if not rho0 < 0 or not T > 0:
        raise InputError("solve_briemann needs rho0 < 0 and T > 0", rho0=rho0, T=T)
    try:
        a1, b1, t1 = _fan_state(pair, x1, rho0, T)
        a2, b2, t2 = (a1, b1, t1) if x2 == x1 else _fan_state(pair, x2, rho0, T)
    except SolveError as e:
        raise SolveError(f"no bracket for the fan equation: {e}", rho0=rho0, x1=x1, x2=x2)
    return BriemannSolution(a1=a1, a2=a2, b1=b1, b2=b2, t1=t1, t2=t2)


@dataclass(frozen=True)
class BridgeShock:
    """Four constant states around a level jump: b1|b2 on the g side, a1|a2 on the f side."""

    rho3: float
    t3: float
    a1: float
    a2: float
    b1: float
    b2: float
    s1: float
    s2: float


def bridge_shock(
    pair: FluxPair, x0: float, t1: float, t2: float, rho1: float, rho2: float, T: float
) -> BridgeShock:
    """
    Seed ρ3 of the g-side shock between b1 and b2 that meets the interface at t3 = T − x0/s2,
    s2 being the f-side shock speed between a1 and a2 through (x0, T).
    """
    if not (T > t1 > t2 > 0):
        raise InputError("bridge_shock needs T > t1 > t2 > 0", t1=t1, t2=t2, T=T)
    if not (rho1 < rho2 < 0):
        raise InputError("bridge_shock needs rho1 < rho2 < 0", rho1=rho1, rho2=rho2)
    b1 = float(pair.g.deriv_inv(-rho1 / t1))
    b2 = float(pair.g.deriv_inv(-rho2 / t2))
    a1 = float(pair.f.inv_branch_clamped("plus", pair.g(b1)))
    a2 = float(pair.f.inv_branch_clamped("plus", pair.g(b2)))
    s2 = float(pair.f.secant(a1, a2))
    if not s2 > 0:
        raise SolveError("f-side shock does not leave the interface", s2=s2)
    t3 = T - x0 / s2
    s1 = float(pair.g.secant(b1, b2))
    rho3 = -s1 * t3
    scale = max(1.0, T)
    if not (t1 + 1e-12 * scale >= t3 >= t2 - 1e-12 * scale):
        raise SolveError("bridging shock misses the interface window", t1=t1, t3=t3, t2=t2)
    if not (rho1 - 1e-12 <= rho3 <= rho2 + 1e-12):
        raise SolveError("bridging seed outside the level gap", rho1=rho1, rho3=rho3, rho2=rho2)
    return BridgeShock(rho3=rho3, t3=t3, a1=a1, a2=a2, b1=b1, b2=b2, s1=s1, s2=s2)


# --- problem and plan -------------------------------------------------------------------------


@dataclass(frozen=True)
class BackwardSpec:
    T: float
    R: float
    rho: Optional[RhoLike]
    y: ExteriorMap = field(default_factory=ExteriorMap.identity)

    @property
    def side(self) -> str:
        return "minus" if self.R < 0 else "plus"

    def mirror(self) -> "BackwardSpec":
        """x -> -x, u -> -u: R -> -R, ρ~(x) = −ρ(−x), y~(x) = −y(−x)."""
        rho = self.rho
        if isinstance(rho, StepFn):
            rho_m: Optional[RhoLike] = rho.reflected()
        elif rho is None:
            rho_m = None
        else:
            rho_m = lambda x: -np.asarray(rho(-np.asarray(x, dtype=float)), dtype=float)  # noqa: E731
        return BackwardSpec(T=self.T, R=-self.R, rho=rho_m, y=self.y.mirror())

    def rho_at(self, x) -> np.ndarray:
        return np.asarray(self.rho(np.asarray(x, dtype=float)), dtype=float)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "BackwardSpec":
        try:
            T = float(payload["T"])
            R = float(payload["R"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed backward spec: {e}")
        rho_payload = payload.get("rho")
        if R != 0 and rho_payload is None:
            raise InputError("backward spec with R != 0 needs rho")
        if rho_payload is None:
            rho = None
        elif isinstance(rho_payload, dict) and "slope" in rho_payload:
            r0, k = float(rho_payload.get("at0", 0.0)), float(rho_payload["slope"])
            rho = lambda x: r0 + k * np.asarray(x, dtype=float)  # noqa: E731
        else:
            rho = StepFn.from_dict(rho_payload)
        return cls(T=T, R=R, rho=rho, y=ExteriorMap.from_payload(payload.get("y", "identity")))


@dataclass(frozen=True)
class BackwardPlan:
    """
    Resolved construction. Level/fan arrays live in the plus frame (mirrored when
    side == 'minus'); u0 is in the physical frame.
    """

    spec: BackwardSpec
    pair: FluxPair
    side: str
    breakpoints: np.ndarray
    levels: np.ndarray
    a: np.ndarray
    b: np.ndarray
    t: np.ndarray
    seeds: np.ndarray
    u0: StepFn
    history: Tuple[Tuple[int, float], ...] = ()

    @property
    def n_levels(self) -> int:
        return int(self.levels.size)

    @property
    def frame_pair(self) -> FluxPair:
        return self.pair if self.side == "plus" else self.pair.mirror()

    @property
    def frame_u0(self) -> StepFn:
        return self.u0 if self.side == "plus" else self.u0.reflected()

    def tmap(self, x) -> np.ndarray:
        """t^N at physical x on the interface block."""
        xa = np.asarray(x, dtype=float)
        xf = xa if self.side == "plus" else -xa
        if self.levels.size == 0:
            return np.full_like(xf, np.nan)
        idx = np.clip(np.searchsorted(self.breakpoints, xf, side="right") - 1, 0, self.levels.size - 1)
        return tmap_array(self.frame_pair, np.clip(xf, 0.0, None), self.levels[idx], self.spec.T)

    def tmap_frame(self, n_per_level: int = 16) -> pd.DataFrame:
        """Sampled t-map (x, t) over each level interval, for export."""
        xs: List[np.ndarray] = []
        for x0, x1 in zip(self.breakpoints[:-1], self.breakpoints[1:]):
            xs.append(np.linspace(x0, x1, n_per_level, endpoint=False))
        if not xs:
            return pd.DataFrame({"x": [], "t": []})
        xf = np.concatenate(xs + [self.breakpoints[-1:]])
        xp = xf if self.side == "plus" else -xf
        return pd.DataFrame({"x": xp, "t": self.tmap(xp)})

    def tmap_decreasing(self) -> bool:
        """t^N strictly decreasing along the interface block (plus frame)."""
        if self.levels.size == 0:
            return True
        return bool(np.all(np.diff(self.t) < 0))

    def rh_residual(self) -> float:
        fp = self.frame_pair
        if self.a.size == 0:
            return 0.0
        return float(np.max(np.abs(fp.f(self.a) - fp.g(self.b))))

    def total_variation(self) -> float:
        """TV of g'(u0) over breakpoints strictly between the first and last level (plus frame)."""
        if self.levels.size < 1:
            return 0.0
        fp = self.frame_pair
        return self.frame_u0.total_variation(self.levels[0], self.levels[-1], transform=fp.g.deriv)

    def bv_bound(self) -> float:
        if self.levels.size < 1:
            return 0.0
        c6 = 1.0 / float(np.min(self.t))
        z1, zk = float(self.levels[0]), float(self.levels[-1])
        return self.spec.T * c6**2 * (abs(z1) + abs(z1 - zk))

    def summary(self) -> Dict[str, Any]:
        return {
            "side": self.side,
            "R": self.spec.R,
            "T": self.spec.T,
            "n_levels": self.n_levels,
            "n_seeds": int(self.seeds.size),
            "u0_pieces": self.u0.n_pieces,
            "rh_residual": self.rh_residual(),
            "total_variation": self.total_variation(),
            "bv_bound": self.bv_bound(),
            "history": [{"N": n, "l1": e} for n, e in self.history],
        }


# --- level placement ---------------------------------------------------------------------------


def _levels(spec: BackwardSpec, N: int) -> Tuple[np.ndarray, np.ndarray]:
    """Breakpoints 0 = x_0 < ... < x_K = R and levels z_1..z_K (plus frame)."""
    R = spec.R
    rho = spec.rho
    if isinstance(rho, StepFn):
        lo, hi, vals = StepFn(rho.breakpoints, rho.values, (0.0, R)).domain_pieces()
        edges = np.concatenate([lo[:1], hi])
        levels = vals
    else:
        edges = np.linspace(0.0, R, N + 1)
        for _ in range(32):
            ends = spec.rho_at(edges)
            wide = np.abs(np.diff(ends)) >= 1.0 / N
            if not np.any(wide):
                break
            mids = 0.5 * (edges[:-1] + edges[1:])[wide]
            edges = np.sort(np.concatenate([edges, mids]))
        levels = spec.rho_at(0.5 * (edges[:-1] + edges[1:]))
    if not np.all(np.isfinite(levels)):
        raise InputError("rho has non-finite values on [0, R]")
    if np.any(np.diff(levels) < -1e-12 * max(1.0, float(np.max(np.abs(levels))))):
        raise InputError("rho must be nondecreasing on [0, R]")
    cap = -_LEVEL_CLAMP * max(1.0, abs(float(levels[0])))
    if np.any(levels > cap):
        logger.debug(f"Уровни rho прижаты к {cap:.3g}")
    levels = np.minimum(levels, cap)
    keep = np.concatenate([[True], levels[1:] != levels[:-1]])
    edges = np.concatenate([edges[:-1][keep], edges[-1:]])
    return edges, levels[keep]


def _validate(spec: BackwardSpec) -> None:
    if not spec.T > 0:
        raise InputError("backward spec needs T > 0", T=spec.T)
    if spec.R < 0:
        raise InputError("plus-frame construction needs R >= 0", R=spec.R)
    rho0 = None
    if spec.R > 0:
        if spec.rho is None:
            raise InputError("R > 0 needs rho")
        samples = np.linspace(0.0, spec.R, 257)
        vals = spec.rho_at(samples)
        if np.any(vals > 1e-12):
            raise InputError("rho must be <= 0 on [0, R]")
        rho0 = float(vals[0])
    problems = spec.y.violations(spec.R, rho0)
    if problems:
        raise InputError(problems[0])


# --- construction ------------------------------------------------------------------------------


def _assemble_exterior_only(spec: BackwardSpec, pair: FluxPair) -> StepFn:
    T = spec.T
    left_first, left_trans, u_left = exterior_transitions(spec.y.restrict(-np.inf, 0.0), pair.g, T)
    u_right, right_trans, _ = exterior_transitions(spec.y.restrict(0.0, np.inf), pair.f, T)
    if abs(pair.f.min_value - pair.g.min_value) > 1e-12:
        logger.warning("Только внешняя часть: f(θ_f) != g(θ_g), профиль у интерфейса приближённый")
    trans: List[Tuple[float, float]] = list(left_trans)
    sigma_l = float(pair.g.secant(u_left, pair.g.theta))
    trans.append((-sigma_l * T, pair.g.theta))
    trans.append((0.0, pair.f.theta))
    sigma_r = float(pair.f.secant(pair.f.theta, u_right))
    trans.append((-sigma_r * T, u_right))
    trans.extend(right_trans)
    return stepfn_from_transitions(left_first, trans)


def _construct_plus(spec: BackwardSpec, pair: FluxPair, N: int, executor=None) -> BackwardPlan:
    _validate(spec)
    T, R = spec.T, spec.R
    if R == 0:
        u0 = _assemble_exterior_only(spec, pair)
        empty = np.empty(0)
        return BackwardPlan(spec, pair, "plus", np.array([0.0]), empty, empty, empty, empty, empty, u0)

    edges, levels = _levels(spec, N)
    K = levels.size

    def fan(i: int) -> BriemannSolution:
        try:
            return solve_briemann(pair, float(edges[i]), float(edges[i + 1]), float(levels[i]), T)
        except (SolveError, DomainError) as e:
            raise type(e)(f"interval {i}: {e}")

    fans = list(executor.map(fan, range(K))) if executor is not None else [fan(i) for i in range(K)]
    a = np.ravel([[s.a1, s.a2] for s in fans])
    b = np.ravel([[s.b1, s.b2] for s in fans])
    t = np.ravel([[s.t1, s.t2] for s in fans])

    seeds = np.empty(K - 1)
    for i in range(K - 1):
        try:
            shock = bridge_shock(pair, float(edges[i + 1]), t[2 * i + 1], t[2 * i + 2], float(levels[i]), float(levels[i + 1]), T)
        except (SolveError, InputError) as e:
            raise SolveError(f"interval {i}: {e}")
        seeds[i] = shock.rho3

    # левая внешняя часть и замыкающая ударная волна в (0, T)
    left_first, trans, u_left = exterior_transitions(spec.y.restrict(-np.inf, 0.0), pair.g, T)
    trans = list(trans)
    sigma_bar = float(pair.g.secant(u_left, b[0]))
    trans.append((-sigma_bar * T, b[0]))
    for i in range(K):
        trans.append((float(levels[i]), b[2 * i + 1]))
        if i < K - 1:
            trans.append((float(seeds[i]), b[2 * i + 2]))

    # правый край блока: ударная волна f-стороны через (R, T)
    right_pieces = spec.y.restrict(R, np.inf)
    u_bar, right_trans, _ = exterior_transitions(right_pieces, pair.f, T)
    a_last, b_last = float(a[-1]), float(b[-1])
    sigma_f = float(pair.f.secant(a_last, u_bar))
    if sigma_f <= R / T:
        trans.append((0.0, a_last))
        trans.append((R - sigma_f * T, u_bar))
    else:
        tau = T - R / sigma_f
        if u_bar < pair.f.theta - 1e-12 or pair.f(u_bar) < pair.g.min_value - 1e-12:
            raise SolveError("right edge state cannot be fed through the interface", u_bar=u_bar)
        b_edge = float(pair.g.inv_branch("plus", pair.f(u_bar)))
        sigma_g = float(pair.g.secant(b_last, b_edge))
        trans.append((-sigma_g * tau, b_edge))
        trans.append((0.0, u_bar))
    trans.extend(right_trans)

    u0 = stepfn_from_transitions(left_first, trans)
    plan = BackwardPlan(spec, pair, "plus", edges, levels, a, b, t, seeds, u0)
    if not plan.tmap_decreasing():
        raise SolveError("resolved t-map is not strictly decreasing")
    logger.debug(f"План построен: уровней={K}, швов={K - 1}, кусков u0={u0.n_pieces}")
    return plan


def construct(spec: BackwardSpec, pair: FluxPair, N: int = 1, executor=None) -> BackwardPlan:
    """Plus-case plan (R ≥ 0) with ρ discretised into levels whose gaps are below 1/N."""
    if N < 1:
        raise InputError("construct needs N >= 1", N=N)
    if spec.R < 0:
        return construct_minus(spec, pair, N, executor=executor)
    return _construct_plus(spec, pair, N, executor=executor)


def construct_minus(spec: BackwardSpec, pair: FluxPair, N: int = 1, executor=None) -> BackwardPlan:
    """Minus-case plan (R ≤ 0), built as the plus plan of the mirrored problem."""
    if spec.R > 0:
        raise InputError("construct_minus needs R <= 0", R=spec.R)
    inner = _construct_plus(spec.mirror(), pair.mirror(), N, executor=executor)
    return BackwardPlan(
        spec=spec,
        pair=pair,
        side="minus",
        breakpoints=inner.breakpoints,
        levels=inner.levels,
        a=inner.a,
        b=inner.b,
        t=inner.t,
        seeds=inner.seeds,
        u0=inner.u0.reflected(),
    )


# --- refinement ---------------------------------------------------------------------------------


def ideal_profile(spec: BackwardSpec, pair: FluxPair, x) -> np.ndarray:
    """Target u(x, T) on the interface block for the continuous ρ (physical frame)."""
    if spec.side == "minus":
        xm = -np.asarray(x, dtype=float)
        return -ideal_profile(spec.mirror(), pair.mirror(), xm)
    xa = np.asarray(x, dtype=float)
    rho = np.minimum(spec.rho_at(xa), 0.0)
    t = tmap_array(pair, xa, rho, spec.T)
    p = np.maximum(xa / np.maximum(spec.T - t, 1e-300), pair.iplus_lo)
    return pair.f.deriv_inv(p)


def round_trip_error(plan: BackwardPlan, nx: int = 201, search: Optional[hj_forward.SearchParams] = None) -> float:
    """L1 distance on the interface block between the forward solve of plan.u0 and the target."""
    R = plan.spec.R
    if R == 0:
        return 0.0
    lo, hi = (0.0, R) if R > 0 else (R, 0.0)
    grid = hj_forward.GridSpec(lo, hi, nx, nt=1)
    sol = hj_forward.solve_profile(plan.u0, plan.pair, plan.spec.T, grid, search=search)
    x = sol.x_grid
    # концы блока исключаем: там стоят ударные волны
    inner = x[1:-1]
    target = ideal_profile(plan.spec, plan.pair, inner)
    return hj_forward.l1_distance(inner, sol.u[1:-1], target)


def refine(
    spec: BackwardSpec,
    pair: FluxPair,
    target_l1: float,
    N0: int = 1,
    n_max: int = N_MAX,
    nx: int = 201,
    executor=None,
) -> BackwardPlan:
    """Doubles N until the forward-solved profile is within target_l1 of the target on the block."""
    if not target_l1 > 0:
        raise ConvergenceError("target_l1 must be positive", target_l1=target_l1)
    # ступенчатое rho строится точно при любом N
    exact = isinstance(spec.rho, StepFn)
    history: List[Tuple[int, float]] = []
    N = max(1, int(N0))
    while N <= n_max:
        plan = construct(spec, pair, N, executor=executor)
        err = round_trip_error(plan, nx=nx)
        history.append((N, err))
        logger.info(f"Уточнение: N={N}, L1={err:.3e}")
        if err <= target_l1:
            return replace(plan, history=tuple(history))
        if exact:
            break
        N *= 2
    raise ConvergenceError(
        "refinement did not reach the target",
        target_l1=target_l1,
        history=[(n, float(f"{e:.3e}")) for n, e in history],
    )
