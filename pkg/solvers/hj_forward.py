"""
Forward solver through the value function of the Hamilton–Jacobi problem.

v(x,t) is the minimal cost over control curves: one segment that stays on one side of
x=0 (class c0), or a path that reaches the interface at t1, dwells there until t2 at
rate min{f*(0), g*(0)} and leaves to (x,t) (classes c_b for t1 = t2, c_r otherwise).
u = ∂v/∂x is read from the slope of the final segment of an argmin curve.

Only x ≥ 0 is solved directly; x < 0 is the same computation on the mirrored problem
(f~(u)=g(-u), g~(u)=f(-u), u0~(x)=-u0(-x)), for which v0~(x) = v0(-x).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import integrate, optimize

from solvers.errors import InputError
from solvers.flux import ConvexFlux, FluxPair
from solvers.stepfn import StepFn

logger = logging.getLogger(__name__)

InitialData = Union[StepFn, Callable[[np.ndarray], np.ndarray]]

# Порог "почти t2 = 0": такие траектории совпадают с классом c0
_DEGENERATE_DWELL = 1e-7
_CHUNK = 256


@dataclass(frozen=True)
class SearchParams:
    tie_tol: float = 1e-9
    n_s: int = 801
    n_y: int = 801
    refine_tol: float = 1e-10
    refine_window: float = 1e-3


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    nx: int
    nt: int = 41

    def __post_init__(self):
        if self.nx < 1 or not self.x_max >= self.x_min:
            raise InputError("grid empty", x_min=self.x_min, x_max=self.x_max, nx=self.nx)
        if self.nt < 1:
            raise InputError("grid needs nt >= 1", nt=self.nt)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def width(self) -> float:
        return float(self.x_max - self.x_min)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "GridSpec":
        try:
            return cls(
                x_min=float(payload["x_min"]),
                x_max=float(payload["x_max"]),
                nx=int(payload["nx"]),
                nt=int(payload.get("nt", 41)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed grid: {e}")


@dataclass(frozen=True)
class ControlCurve:
    """Argmin curve as vertices (x, t) from the foot (y, 0) to the evaluation point."""

    kind: str  # "c0" | "cb" | "cr"
    vertices: Tuple[Tuple[float, float], ...]

    @property
    def n_segments(self) -> int:
        return len(self.vertices) - 1

    @property
    def foot(self) -> float:
        return self.vertices[0][0]

    def crosses_interface(self) -> bool:
        for (x0, _), (x1, _) in zip(self.vertices[:-1], self.vertices[1:]):
            if x0 * x1 < 0:
                return True
        return False

    def mirrored(self) -> "ControlCurve":
        return ControlCurve(self.kind, tuple((-x, t) for x, t in self.vertices))


@dataclass(frozen=True)
class SolutionField:
    """
    u(x, T) on x_grid plus the interface data sampled on t_grid.

    tmap_plus / tmap_minus hold t±(x, T) on the interface-governed part of x_grid and NaN
    elsewhere; y holds the foot of the single-segment characteristic and NaN where the
    interface governs.
    """

    T: float
    x_grid: np.ndarray
    u: np.ndarray
    t_grid: np.ndarray
    R1: np.ndarray
    L1: np.ndarray
    trace_plus: np.ndarray
    trace_minus: np.ndarray
    tmap_plus: np.ndarray
    tmap_minus: np.ndarray
    y: np.ndarray
    pair: Optional[FluxPair] = field(default=None, repr=False, compare=False)

    @property
    def R1_T(self) -> float:
        return float(self.R1[-1])

    @property
    def L1_T(self) -> float:
        return float(self.L1[-1])

    def u_at(self, x) -> np.ndarray:
        return np.interp(x, self.x_grid, self.u)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x_grid, "u": self.u})

    def sidecar(self) -> Dict[str, Any]:
        return {
            "T": self.T,
            "R1": self.R1_T,
            "L1": self.L1_T,
            "t": self.t_grid.tolist(),
            "R1_t": self.R1.tolist(),
            "L1_t": self.L1.tolist(),
            "trace_plus": self.trace_plus.tolist(),
            "trace_minus": self.trace_minus.tolist(),
        }


@dataclass(frozen=True)
class InterfaceReport:
    rh_violation_measure: float
    entropy_violation_measure: float
    dt: float
    n_samples: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rh_violation_measure": self.rh_violation_measure,
            "entropy_violation_measure": self.entropy_violation_measure,
            "dt": self.dt,
            "n_samples": self.n_samples,
        }


@dataclass
class _SideResult:
    u: np.ndarray
    c0: np.ndarray
    cr: np.ndarray
    y0: np.ndarray
    s_star: np.ndarray
    active: np.ndarray

    @property
    def value(self) -> np.ndarray:
        return np.minimum(self.c0, self.cr)


# --- data models for v0 ---------------------------------------------------------------------


def slope_bound(pair: FluxPair, u_lo: float, u_hi: float) -> float:
    """Bound on |characteristic speed| for states in [u_lo, u_hi] and their interface transfers."""
    f, g = pair.f, pair.g
    states = np.array([u_lo, u_hi, f.theta, g.theta], dtype=float)
    g_vals, f_vals = g(states), f(states)
    f_states = np.concatenate(
        [states, f.inv_branch_clamped("plus", g_vals), f.inv_branch_clamped("minus", g_vals)]
    )
    g_states = np.concatenate(
        [states, g.inv_branch_clamped("plus", f_vals), g.inv_branch_clamped("minus", f_vals)]
    )
    speeds = np.concatenate([np.abs(f.deriv(f_states)), np.abs(g.deriv(g_states))])
    return 1.1 * max(float(speeds.max()), 1.0)


class _StepData:
    """Exact primitive of a StepFn: the single-segment cost is convex on each linear piece."""

    exact = True

    def __init__(self, u0: StepFn):
        self.u0 = u0
        self.prim = u0.primitive()
        lo, hi, vals, anchor, aval = self.prim.pieces()
        self._lo, self._hi, self._vals = lo, hi, vals
        self._anchor, self._aval = anchor, aval

    def v0(self, y):
        return self.prim(y)

    def u_range(self) -> Tuple[float, float]:
        return float(self._vals.min()), float(self._vals.max())

    def mirrored(self) -> "_StepData":
        return _StepData(self.u0.reflected())

    def single_segment(
        self,
        x: np.ndarray,
        tau: np.ndarray,
        flux: ConvexFlux,
        y_lo: float,
        y_hi: float,
        prefer: str,
        tie_tol: float,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """min over y in [y_lo, y_hi] of v0(y) + tau·flux*((x − y)/tau); returns (cost, y)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        tau = np.broadcast_to(np.atleast_1d(np.asarray(tau, dtype=float)), x.shape)
        lo = np.maximum(self._lo, y_lo)[None, :]
        hi = np.minimum(self._hi, y_hi)[None, :]
        xx, tt = x[:, None], tau[:, None]
        target = xx - tt * flux.deriv(self._vals)[None, :]
        y = np.clip(target, lo, hi)
        v = self._aval[None, :] + self._vals[None, :] * (y - self._anchor[None, :])
        positive = tt > 0
        safe = np.where(positive, tt, 1.0)
        move = np.where(positive, tt * flux.dual((xx - y) / safe), np.where(y == xx, 0.0, np.inf))
        cost = np.where(hi >= lo, v + move, np.inf)
        return _pick(cost, y, prefer, tie_tol)


class _CallableData:
    """Generic Lipschitz v0: y-grid search followed by bounded scalar refinement."""

    exact = False

    def __init__(self, v0: Callable, lam: float, n_y: int, refine_tol: float, u_range):
        self._v0 = v0
        self.lam = lam
        self.n_y = n_y
        self.refine_tol = refine_tol
        self._u_range = u_range

    def v0(self, y):
        out = np.asarray(self._v0(np.asarray(y, dtype=float)), dtype=float)
        if not np.all(np.isfinite(out)):
            raise InputError("v0 returned non-finite values")
        return out

    def u_range(self) -> Tuple[float, float]:
        return self._u_range

    def mirrored(self) -> "_CallableData":
        v0 = self._v0
        lo, hi = self._u_range
        return _CallableData(lambda y: v0(-np.asarray(y)), self.lam, self.n_y, self.refine_tol, (-hi, -lo))

    def _cost(self, x, tau, flux, y):
        if tau <= 0:
            return np.where(y == x, self.v0(y), np.inf)
        return self.v0(y) + tau * flux.dual((x - y) / tau)

    def single_segment(self, x, tau, flux, y_lo, y_hi, prefer, tie_tol):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        tau = np.broadcast_to(np.atleast_1d(np.asarray(tau, dtype=float)), x.shape)
        costs = np.empty_like(x)
        ys = np.empty_like(x)
        offsets = np.linspace(-1.0, 1.0, self.n_y)
        for i, (xi, ti) in enumerate(zip(x, tau)):
            if ti <= 0:
                ys[i] = xi
                costs[i] = float(self.v0(xi)) if y_lo <= xi <= y_hi else np.inf
                continue
            lo = max(xi - self.lam * ti, y_lo)
            hi = min(xi + self.lam * ti, y_hi)
            if hi < lo:
                costs[i], ys[i] = np.inf, np.nan
                continue
            grid = np.unique(np.clip(xi + self.lam * ti * offsets, lo, hi))
            c = self._cost(xi, ti, flux, grid)
            cmin, ymin = _pick(c[None, :], grid[None, :], prefer, tie_tol)
            k = int(np.searchsorted(grid, ymin[0]))
            a, b = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
            best_c, best_y = float(cmin[0]), float(ymin[0])
            if b > a:
                res = optimize.minimize_scalar(
                    lambda yy: float(self._cost(xi, ti, flux, np.array(yy))),
                    bounds=(a, b),
                    method="bounded",
                    options={"xatol": self.refine_tol},
                )
                if res.fun < best_c - tie_tol:
                    best_c, best_y = float(res.fun), float(res.x)
            costs[i], ys[i] = best_c, best_y
        return costs, ys


def _pick(cost: np.ndarray, y: np.ndarray, prefer: str, tie_tol: float):
    """Row-wise minimum; among near-ties the smallest (or largest) y."""
    cmin = cost.min(axis=1)
    near = cost <= cmin[:, None] + tie_tol
    if prefer == "smallest":
        ysel = np.where(near, y, np.inf).min(axis=1)
    else:
        ysel = np.where(near, y, -np.inf).max(axis=1)
    return cmin, ysel


def _make_data(
    u0: Optional[InitialData],
    v0: Optional[Callable],
    pair: FluxPair,
    span: Tuple[float, float],
    search: SearchParams,
):
    if isinstance(u0, StepFn):
        return _StepData(u0)
    lo, hi = span
    xs = np.linspace(lo, hi, 8001)
    if v0 is None:
        if u0 is None:
            raise InputError("either u0 or v0 is required")
        us = np.asarray(u0(xs), dtype=float)
        if not np.all(np.isfinite(us)):
            raise InputError("u0 returned non-finite values")
        prim = integrate.cumulative_trapezoid(us, xs, initial=0.0)
        prim -= np.interp(0.0, xs, prim)
        v0 = lambda y: np.interp(y, xs, prim)  # noqa: E731
        u_range = (float(us.min()), float(us.max()))
    else:
        vs = np.asarray(v0(xs), dtype=float)
        if not np.all(np.isfinite(vs)):
            raise InputError("v0 returned non-finite values")
        slopes = np.diff(vs) / np.diff(xs)
        u_range = (float(slopes.min()), float(slopes.max()))
    lam = slope_bound(pair, *u_range)
    return _CallableData(v0, lam, search.n_y, search.refine_tol, u_range)


# --- the plus-side solver ------------------------------------------------------------------------


class _PlusSide:
    """
    x ≥ 0 half of the problem.

    W(s) is the cost of reaching (0, s): min over t1 ≤ s of w(t1) + (s − t1)·m, where w(t1)
    is the best single-segment cost of reaching (0, t1) from either side.
    """

    def __init__(self, pair: FluxPair, data, t_max: float, search: SearchParams, prefer: str):
        self.pair = pair
        self.data = data
        self.search = search
        self.prefer = prefer
        self.m = pair.dwell_cost
        self.s_grid = np.linspace(0.0, t_max, search.n_s)
        self.phi = self._w(self.s_grid) - self.m * self.s_grid
        self.phi_run = np.minimum.accumulate(self.phi)
        idx = np.arange(self.phi.size)
        self.run_arg = np.maximum.accumulate(np.where(self.phi <= self.phi_run, idx, 0))
        self.W_grid = self.m * self.s_grid + self.phi_run

    def _w(self, s, with_foot: bool = False):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        zeros = np.zeros_like(s)
        tol = self.search.tie_tol
        left, yl = self.data.single_segment(zeros, s, self.pair.g, -np.inf, 0.0, self.prefer, tol)
        right, yr = self.data.single_segment(zeros, s, self.pair.f, 0.0, np.inf, self.prefer, tol)
        w = np.minimum(left, right)
        if with_foot:
            return w, np.where(left <= right, yl, yr), np.where(left <= right, "g", "f")
        return w

    def W(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        k = np.clip(np.searchsorted(self.s_grid, s, side="right") - 1, 0, self.s_grid.size - 1)
        return self.m * s + np.minimum(self.phi_run[k], self._w(s) - self.m * s)

    def _interface_cost(self, x: float, t: float, tau):
        """Cost through the interface with the last segment of duration tau."""
        return self.W(t - tau) + tau * self.pair.f.dual(x / tau)

    def evaluate(self, xs: np.ndarray, t: float) -> _SideResult:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        f = self.pair.f
        tol = self.search.tie_tol
        c0, y0 = self.data.single_segment(xs, np.full_like(xs, t), f, 0.0, np.inf, self.prefer, tol)

        mask = self.s_grid < t
        s = self.s_grid[mask]
        Wk = self.W_grid[mask]
        tau = t - s
        cost = Wk[None, :] + tau[None, :] * f.dual(xs[:, None] / tau[None, :])
        k = np.argmin(cost, axis=1)
        cr = cost[np.arange(xs.size), k]
        tau_star = tau[k]

        # уточнение по длительности последнего отрезка: относительная точность при малых tau
        window = self.search.refine_window * (1.0 + np.abs(c0))
        for i in np.flatnonzero(cr <= c0 + window):
            tau_hi = tau[max(k[i] - 1, 0)]
            tau_lo = tau[k[i] + 1] if k[i] + 1 < s.size else 1e-12 * t
            if tau_hi <= tau_lo:
                continue
            xi = float(xs[i])
            res = optimize.minimize_scalar(
                lambda tt: float(self._interface_cost(xi, t, tt)[0]),
                bounds=(tau_lo, tau_hi),
                method="bounded",
                options={"xatol": self.search.refine_tol * max(1.0, t)},
            )
            if res.fun < cr[i]:
                cr[i], tau_star[i] = float(res.fun), float(res.x)

        s_star = t - tau_star
        active = (cr <= c0 + tol) & (s_star > _DEGENERATE_DWELL * t)
        p = xs / np.maximum(tau_star, 1e-300)
        u_iface = f.deriv_inv(p)
        u_free = f.deriv_inv((xs - y0) / t)
        u = np.where(active, u_iface, u_free)
        return _SideResult(u=u, c0=c0, cr=cr, y0=y0, s_star=s_star, active=active)

    def is_active(self, x: float, t: float) -> bool:
        return bool(self.evaluate(np.array([x]), t).active[0])

    def trace(self, t: float, eps: float) -> float:
        """
        u(0+, t). When the interface governs, the outgoing state solves f(u) = −W'(t)
        (first-order condition of the interface cost as x -> 0+), W' taken one-sided.
        """
        res = self.evaluate(np.array([eps]), t)
        if not res.active[0]:
            return float(res.u[0])
        h = 1e-5 * t
        w0, w1, w2 = self.W(np.array([t, t - h, t - 2.0 * h]))
        slope = (3.0 * w0 - 4.0 * w1 + w2) / (2.0 * h)
        return float(self.pair.f.inv_branch_clamped("plus", -slope))

    def boundary(self, t: float, x_hi: float, eps: float) -> float:
        """R1(t): end of the interface-governed interval, by bisection on the active predicate."""
        if not self.is_active(eps, t):
            return 0.0
        if self.is_active(x_hi, t):
            return float(x_hi)
        lo, hi = eps, x_hi
        while hi - lo > 1e-9 * max(1.0, x_hi):
            mid = 0.5 * (lo + hi)
            if self.is_active(mid, t):
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def curve(self, x: float, t: float) -> Tuple[float, ControlCurve]:
        res = self.evaluate(np.array([x]), t)
        c0, cr, s2 = float(res.c0[0]), float(res.cr[0]), float(res.s_star[0])
        if not res.active[0]:
            return c0, ControlCurve("c0", ((float(res.y0[0]), 0.0), (x, t)))
        k = int(np.clip(np.searchsorted(self.s_grid, s2, side="right") - 1, 0, self.s_grid.size - 1))
        phi_s2 = float(self._w(s2)[0] - self.m * s2)
        t1 = s2 if phi_s2 <= self.phi_run[k] else float(self.s_grid[self.run_arg[k]])
        _, foot, _ = self._w(t1, with_foot=True)
        y = float(foot[0])
        if abs(s2 - t1) <= self.search.refine_tol * max(1.0, t):
            return cr, ControlCurve("cb", ((y, 0.0), (0.0, s2), (x, t)))
        return cr, ControlCurve("cr", ((y, 0.0), (0.0, t1), (0.0, s2), (x, t)))


# --- public operations -----------------------------------------------------------------------------


def value(
    v0: Callable,
    pair: FluxPair,
    x: float,
    t: float,
    search: Optional[SearchParams] = None,
) -> Tuple[float, ControlCurve]:
    """Value function v(x, t) for the primitive v0 together with an argmin control curve."""
    if not t > 0:
        raise InputError("value needs t > 0", t=t)
    search = search or SearchParams()
    if isinstance(v0, StepFn):
        raise InputError("value expects the primitive v0; pass StepFn.primitive()")
    span_w = 4.0 * (abs(x) + 1.0) * (1.0 + t)
    if hasattr(v0, "u0") and isinstance(getattr(v0, "u0"), StepFn):
        data = _StepData(v0.u0)
    else:
        data = _make_data(None, v0, pair, (x - span_w, x + span_w), search)
    if x >= 0:
        side = _PlusSide(pair, data, t, search, "smallest")
        return side.curve(float(x), t)
    side = _PlusSide(pair.mirror(), data.mirrored(), t, search, "largest")
    cost, curve = side.curve(float(-x), t)
    return cost, curve.mirrored()


def _trace_eps(grid: GridSpec) -> float:
    return 1e-7 * max(1.0, grid.width)


def solve_profile(
    u0: InitialData,
    pair: FluxPair,
    T: float,
    grid: GridSpec,
    search: Optional[SearchParams] = None,
    executor=None,
) -> SolutionField:
    """
    u(·, T) on the grid together with R1, L1, traces and characteristic data.

    Args:
        u0: StepFn (exact primitive) or a callable u0(x)
        executor: optional object with an ordered `map(func, items)`; x-chunks go through it
    """
    if not T > 0:
        raise InputError("solve_profile needs T > 0", T=T)
    if grid.nx < 1:
        raise InputError("grid empty")
    search = search or SearchParams()
    pad = 2.0 * grid.width + 1.0
    data = _make_data(u0, None, pair, (grid.x_min - pad, grid.x_max + pad), search)
    plus = _PlusSide(pair, data, T, search, "smallest")
    minus = _PlusSide(pair.mirror(), data.mirrored(), T, search, "largest")
    eps = _trace_eps(grid)

    x = grid.x
    x_eval = np.where(x == 0.0, eps, x)
    right = x_eval >= 0
    xr, xl = x_eval[right], -x_eval[~right]

    def run_chunk(job):
        side, xs = job
        return (plus if side == "plus" else minus).evaluate(xs, T)

    jobs = [("plus", xr[i : i + _CHUNK]) for i in range(0, xr.size, _CHUNK)]
    jobs += [("minus", xl[i : i + _CHUNK]) for i in range(0, xl.size, _CHUNK)]
    results = list(executor.map(run_chunk, jobs)) if executor is not None else [run_chunk(j) for j in jobs]
    n_plus = len([j for j in jobs if j[0] == "plus"])
    res_r = _concat(results[:n_plus])
    res_l = _concat(results[n_plus:])

    u = np.empty_like(x)
    tmap_plus = np.full_like(x, np.nan)
    tmap_minus = np.full_like(x, np.nan)
    y = np.full_like(x, np.nan)
    if res_r is not None:
        u[right] = res_r.u
        tmap_plus[right] = np.where(res_r.active, res_r.s_star, np.nan)
        y[right] = np.where(res_r.active, np.nan, res_r.y0)
    if res_l is not None:
        u[~right] = -res_l.u
        tmap_minus[~right] = np.where(res_l.active, res_l.s_star, np.nan)
        y[~right] = np.where(res_l.active, np.nan, -res_l.y0)

    t_grid = T * np.arange(1, grid.nt + 1) / grid.nt
    x_hi = grid.x_max if grid.x_max > 0 else grid.width or 1.0
    x_lo = -grid.x_min if grid.x_min < 0 else grid.width or 1.0

    def track(t):
        return (
            plus.boundary(t, x_hi, eps),
            -minus.boundary(t, x_lo, eps),
            plus.trace(t, eps),
            -minus.trace(t, eps),
        )

    tracked = list(executor.map(track, t_grid)) if executor is not None else [track(t) for t in t_grid]
    R1, L1, tr_p, tr_m = (np.array(col, dtype=float) for col in zip(*tracked))
    # u(0, T) понимается как след справа
    u[x == 0.0] = tr_p[-1]

    if R1[-1] > 0 and L1[-1] < 0:
        logger.warning(f"Обе свободные границы ненулевые: R1(T)={R1[-1]:.6g}, L1(T)={L1[-1]:.6g}")
    logger.info(f"Профиль решён: nx={grid.nx}, T={T:g}, R1(T)={R1[-1]:.6g}, L1(T)={L1[-1]:.6g}")

    return SolutionField(
        T=float(T),
        x_grid=x,
        u=u,
        t_grid=t_grid,
        R1=R1,
        L1=L1,
        trace_plus=tr_p,
        trace_minus=tr_m,
        tmap_plus=tmap_plus,
        tmap_minus=tmap_minus,
        y=y,
        pair=pair,
    )


def _concat(parts: Sequence[_SideResult]) -> Optional[_SideResult]:
    if not parts:
        return None
    return _SideResult(
        u=np.concatenate([p.u for p in parts]),
        c0=np.concatenate([p.c0 for p in parts]),
        cr=np.concatenate([p.cr for p in parts]),
        y0=np.concatenate([p.y0 for p in parts]),
        s_star=np.concatenate([p.s_star for p in parts]),
        active=np.concatenate([p.active for p in parts]),
    )


def interface_traces(sol: SolutionField) -> Tuple[np.ndarray, np.ndarray]:
    """(u(0−, t), u(0+, t)) on sol.t_grid."""
    return sol.trace_minus.copy(), sol.trace_plus.copy()


def check_interface(sol: SolutionField, tol: float = 1e-6, pair: Optional[FluxPair] = None) -> InterfaceReport:
    """
    Measures of the sampled times violating flux continuity f(u(0+)) = g(u(0−)) and the
    interface entropy condition (no f'(u(0+)) > 0 together with g'(u(0−)) < 0).
    """
    pair = pair or sol.pair
    if pair is None:
        raise InputError("check_interface needs the flux pair")
    dt = sol.T / max(sol.t_grid.size, 1)
    minus, plus = interface_traces(sol)
    rh = np.abs(pair.f(plus) - pair.g(minus)) > tol * (1.0 + np.abs(pair.f(plus)))
    entropy = (pair.f.deriv(plus) > tol) & (pair.g.deriv(minus) < -tol)
    report = InterfaceReport(
        rh_violation_measure=float(np.count_nonzero(rh) * dt),
        entropy_violation_measure=float(np.count_nonzero(entropy) * dt),
        dt=float(dt),
        n_samples=int(sol.t_grid.size),
    )
    logger.debug(f"Проверка интерфейса: {report}")
    return report


def tmap_monotonicity_violations(sol: SolutionField) -> int:
    """Count of consecutive interior points where t+(·,T) fails to decrease (t− to increase)."""
    count = 0
    for tm, sign in ((sol.tmap_plus, -1.0), (sol.tmap_minus, 1.0)):
        interior = tm[np.isfinite(tm)][1:-1]
        if interior.size > 1:
            count += int(np.count_nonzero(sign * np.diff(interior) <= 0))
    return count


def l1_distance(x: np.ndarray, u1: np.ndarray, u2: np.ndarray, lo: float = -np.inf, hi: float = np.inf) -> float:
    """Trapezoid L1 distance on the part of the common grid x inside [lo, hi]."""
    x = np.asarray(x, dtype=float)
    keep = (x >= lo) & (x <= hi)
    if np.count_nonzero(keep) < 2:
        return 0.0
    return float(integrate.trapezoid(np.abs(np.asarray(u1)[keep] - np.asarray(u2)[keep]), x[keep]))
