"""
Optimal control of the time-T profile.

The cost of a profile u(·,T) against a target k is J; over characteristic data
(R, ρ, y) it becomes J̃, which is cheap to evaluate:

    ∫_{x<0} |(x − y)/T − η|² + ∫_0^R |h₊(x/(T − t(x))) − η|² + ∫_{x>R} |(x − y)/T − η|²

with η = g'(k) on x ≤ 0 and f'(k) on x > 0. On ρ < 0 the middle integrand equals
|−ρ/t − η|². minimize searches J̃ over monotone step data; the minus side (R < 0) is the
plus side of the mirrored problem.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from cachetools import LRUCache
from scipy import integrate, optimize

from solvers import backward, hj_forward
from solvers.errors import InputError
from solvers.exterior import ExteriorMap, ExteriorPiece
from solvers.flux import FluxPair
from solvers.isotonic import isotonic_fit
from solvers.rootfind import bisect_scalar
from solvers.stepfn import StepFn

logger = logging.getLogger(__name__)

TargetLike = Union[StepFn, Callable[[np.ndarray], np.ndarray], None]

_TIE_TOL = 1e-12
_T_FLOOR = 1e-3


# --- quadrature helpers ----------------------------------------------------------------------


def _nodes(edges: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Simpson nodes (cells × n) and the matching evaluation points nudged inside each cell,
    so piecewise-constant data is read on the cell's own piece.
    """
    n = n + 1 if n % 2 == 0 else n
    a, b = edges[:-1], edges[1:]
    s = np.linspace(0.0, 1.0, n)
    xs = a[:, None] + (b - a)[:, None] * s[None, :]
    inner = np.clip(xs, np.nextafter(a, b)[:, None], np.nextafter(b, a)[:, None])
    return xs, inner


def _cell_integral(values: np.ndarray, xs: np.ndarray) -> np.ndarray:
    return integrate.simpson(values, x=xs, axis=1)


def _edges(lo: float, hi: float, extra: Sequence[float] = (), n: int = 1) -> np.ndarray:
    pts = [np.linspace(lo, hi, n + 1)]
    extra = np.asarray(extra, dtype=float)
    pts.append(extra[(extra > lo) & (extra < hi)])
    return np.unique(np.concatenate(pts))


def _snap(fit: np.ndarray, rel: float = 1e-10) -> np.ndarray:
    """Merges adjacent levels of a nondecreasing fit that differ only by rounding."""
    out = fit.copy()
    tol = rel * max(1.0, float(np.max(np.abs(out)))) if out.size else 0.0
    for j in range(1, out.size):
        if out[j] - out[j - 1] < tol:
            out[j] = out[j - 1]
    return out


# --- types -------------------------------------------------------------------------------------


@dataclass(frozen=True)
class TargetSpec:
    """Target k on [−C, C]; k = None is the stationary state θ̄."""

    k: TargetLike
    C: float

    def __post_init__(self):
        if not self.C > 0:
            raise InputError("target support radius C must be positive", C=self.C)

    def k_at(self, pair: FluxPair, x) -> np.ndarray:
        xa = np.asarray(x, dtype=float)
        if self.k is None:
            return np.asarray(pair.stationary_state(xa), dtype=float)
        return np.asarray(self.k(xa), dtype=float) * np.ones_like(xa)

    def eta(self, pair: FluxPair, x) -> np.ndarray:
        """η[k] on x; zero outside [−C, C]."""
        xa = np.asarray(x, dtype=float)
        kv = self.k_at(pair, xa)
        out = np.where(xa <= 0, pair.g.deriv(kv), pair.f.deriv(kv))
        return np.where(np.abs(xa) <= self.C, out, 0.0)

    def breakpoints(self) -> np.ndarray:
        if isinstance(self.k, StepFn):
            bp = self.k.breakpoints
            return bp[(bp > -self.C) & (bp < self.C)]
        return np.empty(0)

    def eta_norm2(self, pair: FluxPair, n_quad: int = 64) -> float:
        edges = _edges(-self.C, self.C, np.concatenate([[0.0], self.breakpoints()]))
        xs, inner = _nodes(edges, n_quad)
        return float(_cell_integral(self.eta(pair, inner) ** 2, xs).sum())

    def mirror(self) -> "TargetSpec":
        """k~(x) = −k(−x), so that η~(x) = −η(−x) for the mirrored pair."""
        k = self.k
        if k is None:
            return TargetSpec(None, self.C)
        if isinstance(k, StepFn):
            return TargetSpec(k.reflected(), self.C)
        return TargetSpec(lambda x: -np.asarray(k(-np.asarray(x, dtype=float)), dtype=float), self.C)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any], pair: Optional[FluxPair] = None, T: Optional[float] = None) -> "TargetSpec":
        if not isinstance(payload, dict) or "C" not in payload:
            raise InputError("target needs the support radius C")
        try:
            C = float(payload["C"])
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed target radius: {e}")
        k = payload.get("k", "stationary")
        if k == "stationary" or k is None:
            return cls(None, C)
        if isinstance(k, dict) and "from_triple" in k:
            if pair is None or T is None:
                raise InputError("a generated target needs the flux pair and T")
            return target_from_triple(AdmissibleTriple.from_dict(k["from_triple"]), T, pair, C)
        if isinstance(k, dict):
            return cls(StepFn.from_dict(k), C)
        raise InputError("target k must be 'stationary', a StepFn or {'from_triple': ...}")


@dataclass(frozen=True)
class AdmissibleTriple:
    """(R, ρ, y): interface block length, interface feet on the block, exterior feet."""

    R: float
    rho: Optional[StepFn] = None
    y: ExteriorMap = field(default_factory=ExteriorMap.identity)

    @classmethod
    def zero(cls) -> "AdmissibleTriple":
        return cls(0.0, None, ExteriorMap.identity())

    @property
    def side(self) -> str:
        return "minus" if self.R < 0 else "plus"

    def mirror(self) -> "AdmissibleTriple":
        rho = None if self.rho is None else self.rho.reflected()
        return AdmissibleTriple(-self.R, rho, self.y.mirror())

    def rho_at0(self) -> Optional[float]:
        if self.rho is None or self.R == 0:
            return None
        return float(self.rho(0.0)) if self.R > 0 else float(self.rho.left_limit(0.0))

    def violations(self) -> List[str]:
        if self.R < 0:
            return self.mirror().violations()
        problems: List[str] = []
        if self.R > 0:
            if self.rho is None:
                return ["R > 0 needs rho"]
            rho_on = StepFn(self.rho.breakpoints, self.rho.values, (0.0, self.R))
            if not rho_on.is_nondecreasing(1e-12):
                problems.append("rho not nondecreasing")
            if rho_on.max() > 1e-12:
                problems.append("rho > 0 on [0, R]")
        problems += self.y.violations(self.R, self.rho_at0())
        return problems

    def truncated(self, M1: float) -> "AdmissibleTriple":
        """y replaced by the identity off [−M1, M1], constant levels clipped into [−M1, M1]."""
        pieces = []
        for p in self.y.restrict(-M1, M1):
            if p.kind == "const":
                pieces.append(ExteriorPiece(p.lo, p.hi, "const", float(np.clip(p.value, -M1, M1))))
        return AdmissibleTriple(self.R, self.rho, ExteriorMap(tuple(pieces)).merged())

    def backward_spec(self, T: float) -> backward.BackwardSpec:
        return backward.BackwardSpec(T=T, R=self.R, rho=self.rho, y=self.y)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "R": self.R,
            "rho": None if self.rho is None else self.rho.to_dict(),
            "y": self.y.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "AdmissibleTriple":
        try:
            R = float(payload["R"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed triple: {e}")
        rho = payload.get("rho")
        return cls(
            R=R,
            rho=None if rho is None else StepFn.from_dict(rho),
            y=ExteriorMap.from_payload(payload.get("y", "identity")),
        )


@dataclass(frozen=True)
class DiscSpec:
    n_R: int = 33
    n_levels: int = 400
    n_quad: int = 64
    max_refine: int = 3
    refine_tol: float = 1e-4
    n_forward: int = 401

    def __post_init__(self):
        if self.n_R < 2:
            raise InputError("disc needs n_R >= 2", n_R=self.n_R)
        if self.n_levels < 1:
            raise InputError("disc needs n_levels >= 1", n_levels=self.n_levels)
        if self.n_quad < 3:
            raise InputError("disc needs n_quad >= 3", n_quad=self.n_quad)
        if self.max_refine < 0 or not self.refine_tol > 0:
            raise InputError("disc refinement settings are infeasible", max_refine=self.max_refine, refine_tol=self.refine_tol)
        if self.n_forward < 2:
            raise InputError("disc needs n_forward >= 2", n_forward=self.n_forward)

    @classmethod
    def from_dict(cls, payload: Optional[Dict[str, Any]]) -> "DiscSpec":
        payload = payload or {}
        try:
            return cls(
                n_R=int(payload.get("n_R", 33)),
                n_levels=int(payload.get("n_levels", 400)),
                n_quad=int(payload.get("n_quad", 64)),
                max_refine=int(payload.get("max_refine", 3)),
                refine_tol=float(payload.get("refine_tol", 1e-4)),
                n_forward=int(payload.get("n_forward", 401)),
            )
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed disc: {e}")


@dataclass(frozen=True)
class Bounds:
    R0: float
    rho0: float
    M1: float
    eta_norm2: float

    def to_dict(self) -> Dict[str, float]:
        return {"R0": self.R0, "rho0": self.rho0, "M1": self.M1, "eta_norm2": self.eta_norm2}


@dataclass(frozen=True)
class JReport:
    value: float
    terms: Dict[str, float]
    clamp_count: int

    def to_dict(self) -> Dict[str, Any]:
        return {"J": self.value, "terms": dict(self.terms), "clamp_count": self.clamp_count}


# --- cost functionals --------------------------------------------------------------------------


def evaluate_J(sol: hj_forward.SolutionField, target: TargetSpec) -> JReport:
    """Cost of the profile sol.u(·, T) split over (−∞, L1), (L1, 0), (0, R1), (R1, ∞)."""
    pair = sol.pair
    if pair is None:
        raise InputError("cost_J needs a solution that carries its flux pair")
    x, u = sol.x_grid, sol.u
    if x[0] > -target.C or x[-1] < target.C:
        logger.warning(f"Сетка [{x[0]:g}, {x[-1]:g}] не покрывает [-C, C], C={target.C:g}")
    L1, R1 = sol.L1_T, sol.R1_T
    eta = target.eta(pair, x)
    g_slope, n_g = pair.g_slope_of_f_state(u)
    f_slope, n_f = pair.f_slope_of_g_state(u)

    regions = {
        "left_outer": (x <= L1) & (x <= 0),
        "left_inner": (x >= L1) & (x <= 0),
        "right_inner": (x >= 0) & (x <= R1),
        "right_outer": (x >= R1) & (x >= 0),
    }
    slopes = {
        "left_outer": pair.g.deriv(u),
        "left_inner": f_slope,
        "right_inner": g_slope,
        "right_outer": pair.f.deriv(u),
    }
    terms: Dict[str, float] = {}
    for name, mask in regions.items():
        if np.count_nonzero(mask) < 2:
            terms[name] = 0.0
            continue
        terms[name] = float(integrate.trapezoid((slopes[name][mask] - eta[mask]) ** 2, x[mask]))
    inner_l = regions["left_inner"] & (x > L1)
    inner_r = regions["right_inner"] & (x < R1)
    clamps = int(np.count_nonzero(inner_l & (pair.g(u) < pair.f.min_value - 1e-10)))
    clamps += int(np.count_nonzero(inner_r & (pair.f(u) < pair.g.min_value - 1e-10)))
    if clamps:
        logger.debug(f"J: состояния вне ветвей прижаты в {clamps} точках (всего {n_g + n_f})")
    return JReport(value=float(sum(terms.values())), terms=terms, clamp_count=clamps)


def cost_J(sol: hj_forward.SolutionField, target: TargetSpec) -> float:
    return evaluate_J(sol, target).value


def cost_Jtilde(
    triple: AdmissibleTriple,
    target: TargetSpec,
    T: float,
    pair: FluxPair,
    n_quad: int = 64,
) -> float:
    """J̃ of the triple, Simpson on every interval between data breakpoints."""
    if not T > 0:
        raise InputError("cost_Jtilde needs T > 0", T=T)
    if triple.R < 0:
        return cost_Jtilde(triple.mirror(), target.mirror(), T, pair.mirror(), n_quad)
    R = triple.R
    y_edges = [v for p in triple.y.pieces for v in (p.lo, p.hi) if np.isfinite(v)]
    L = max([target.C, R] + [abs(v) for v in y_edges])
    marks = np.concatenate([[0.0, -target.C, target.C, R], y_edges, target.breakpoints()])

    total = 0.0
    for lo, hi in ((-L, 0.0), (R, L)):
        if hi <= lo:
            continue
        xs, inner = _nodes(_edges(lo, hi, marks), n_quad)
        slope = (inner - triple.y(inner)) / T
        total += float(_cell_integral((slope - target.eta(pair, inner)) ** 2, xs).sum())

    if R > 0:
        if triple.rho is None:
            raise InputError("R > 0 needs rho")
        extra = np.concatenate([marks, triple.rho.breakpoints])
        xs, inner = _nodes(_edges(0.0, R, extra), n_quad)
        rho = np.minimum(triple.rho(inner), 0.0)
        t = backward.tmap_array(pair, inner, rho, T)
        p = np.maximum(inner / np.maximum(T - t, 1e-300), pair.iplus_lo)
        slope = pair.h_plus(p)
        total += float(_cell_integral((slope - target.eta(pair, inner)) ** 2, xs).sum())
    return total


def bounds(target: TargetSpec, T: float, pair: FluxPair, n_quad: int = 64) -> Bounds:
    """
    ρ₀ = (18T²‖η‖²)^{1/3}; R₀ the smallest R ≥ C with ∫_C^R h₊(x/T)² dx > 2‖η‖²;
    M₁ = R₀ + (6T²‖η‖²)^{1/3}.
    """
    if not T > 0:
        raise InputError("bounds need T > 0", T=T)
    n2 = target.eta_norm2(pair, n_quad)
    C = target.C
    rho0 = float(np.cbrt(18.0 * T * T * n2))
    if n2 <= 0.0:
        return Bounds(R0=C, rho0=rho0, M1=C, eta_norm2=n2)
    lo = pair.iplus_lo

    def h2(x: float) -> float:
        return float(pair.h_plus(max(x / T, lo))) ** 2

    def excess(R: float) -> float:
        return integrate.quad(h2, C, R, limit=200)[0] - 2.0 * n2

    R0 = bisect_scalar(excess, C, C + 1.0, tol=1e-12 * max(1.0, C))
    M1 = R0 + float(np.cbrt(6.0 * T * T * n2))
    return Bounds(R0=float(R0), rho0=rho0, M1=float(M1), eta_norm2=n2)


def target_from_triple(triple: AdmissibleTriple, T: float, pair: FluxPair, C: float) -> TargetSpec:
    """Target k with J̃(triple) = 0: η matches the slopes the triple produces."""
    if triple.R < 0:
        return target_from_triple(triple.mirror(), T, pair.mirror(), C).mirror()
    R = triple.R

    def k(x):
        xa = np.asarray(x, dtype=float)
        slope = (xa - triple.y(xa)) / T
        out = np.where(xa <= 0, pair.g.deriv_inv(slope), pair.f.deriv_inv(slope))
        block = (xa > 0) & (xa < R)
        if np.any(block):
            xb = xa[block]
            rho = np.minimum(triple.rho(xb), 0.0)
            t = backward.tmap_array(pair, xb, rho, T)
            p = np.maximum(xb / np.maximum(T - t, 1e-300), pair.iplus_lo)
            out = out.astype(float)
            out[block] = pair.f.deriv_inv(pair.h_plus(p))
        return np.where(np.abs(xa) <= C, out, pair.stationary_state(xa))

    return TargetSpec(k, C)


# --- minimisation ------------------------------------------------------------------------------


@dataclass(frozen=True)
class _Candidate:
    R: float
    triple: AdmissibleTriple
    jtilde: float


class _PlusFitter:
    """Monotone least-squares fits of (ρ, y) for fixed R in the plus frame."""

    def __init__(self, target: TargetSpec, pair: FluxPair, T: float, bnds: Bounds, disc: DiscSpec):
        self.target = target
        self.pair = pair
        self.T = T
        self.bounds = bnds
        self.disc = disc
        self.n_cells = disc.n_levels
        self._solved: LRUCache[Tuple[float, int], _Candidate] = LRUCache(maxsize=4 * disc.n_R + 64)

    def candidate(self, R: float) -> _Candidate:
        key = (float(R), self.n_cells)
        hit = self._solved.get(key)
        if hit is None:
            hit = self._fit(float(R))
            self._solved[key] = hit
        return hit

    def _exterior_cells(self, lo: float, hi: float):
        edges = _edges(lo, hi, self.target.breakpoints(), self.n_cells)
        xs, inner = _nodes(edges, self.disc.n_quad)
        y_star = inner - self.T * self.target.eta(self.pair, inner)
        width = np.diff(edges)
        means = _cell_integral(y_star, xs) / width
        return edges, xs, inner, y_star, means, width / self.T**2

    def _interface_cells(self, R: float):
        pair, T = self.pair, self.T
        edges = _edges(0.0, R, self.target.breakpoints(), self.n_cells)
        xs, inner = _nodes(edges, self.disc.n_quad)
        q = self.target.eta(pair, inner)
        p = pair.h_plus_inv(q)
        t_lo = backward.tmap_lower(pair, inner, T)
        t = np.clip(T - inner / np.maximum(p, 1e-300), t_lo, T)
        rho_star = -np.maximum(q, 0.0) * t
        width = np.diff(edges)
        means = _cell_integral(rho_star, xs) / width
        t_mean = np.maximum(_cell_integral(t, xs) / width, _T_FLOOR * T)
        return edges, means, width / t_mean**2

    def _identity_choice(
        self, edges: np.ndarray, xs: np.ndarray, y_star: np.ndarray, fit: np.ndarray, cap: float, nxt: float
    ) -> np.ndarray:
        """Cells where y = x is no worse than the constant fit and keeps y monotone."""
        const_cost = _cell_integral((fit[:, None] - y_star) ** 2, xs)
        id_cost = _cell_integral((xs - y_star) ** 2, xs)
        use = np.zeros(fit.size, dtype=bool)
        prev_end = -np.inf
        for j in range(fit.size):
            a, b = edges[j], edges[j + 1]
            after = fit[j + 1] if j + 1 < fit.size else nxt
            if id_cost[j] <= const_cost[j] + _TIE_TOL and prev_end <= a and after >= b and b <= cap:
                use[j] = True
                prev_end = b
            else:
                prev_end = fit[j]
        return use

    @staticmethod
    def _pieces(edges: np.ndarray, fit: np.ndarray, use_identity: np.ndarray) -> List[ExteriorPiece]:
        return [
            ExteriorPiece(float(edges[j]), float(edges[j + 1]), "const", float(fit[j]))
            for j in range(fit.size)
            if not use_identity[j]
        ]

    def _fit(self, R: float) -> _Candidate:
        M1, rho0 = self.bounds.M1, self.bounds.rho0
        l_edges, l_xs, _, l_star, l_means, l_w = self._exterior_cells(-M1, 0.0)
        n_left = l_means.size

        rho: Optional[StepFn] = None
        if R > 0:
            m_edges, m_means, m_w = self._interface_cells(R)
            seq = np.concatenate([l_means, m_means])
            fit = isotonic_fit(seq, np.concatenate([l_w, m_w]), upper=0.0)
            lower = np.concatenate([np.full(n_left, -M1), np.full(m_means.size, -rho0)])
            fit = _snap(np.maximum.accumulate(np.maximum(fit, lower)))
            left_fit, rho_fit = fit[:n_left], fit[n_left:]
            rho = StepFn.from_cells(m_edges, rho_fit)
            cap = float(rho_fit[0])
        else:
            left_fit = _snap(isotonic_fit(l_means, l_w, lower=-M1, upper=0.0))
            cap = 0.0

        left_id = self._identity_choice(l_edges, l_xs, l_star, left_fit, cap, np.inf)
        pieces = self._pieces(l_edges, left_fit, left_id)

        if R < M1:
            r_edges, r_xs, _, r_star, r_means, r_w = self._exterior_cells(R, M1)
            right_fit = _snap(isotonic_fit(r_means, r_w, lower=0.0, upper=M1))
            right_id = self._identity_choice(r_edges, r_xs, r_star, right_fit, np.inf, M1)
            pieces += self._pieces(r_edges, right_fit, right_id)

        triple = AdmissibleTriple(R, rho, ExteriorMap(tuple(pieces)).merged())
        cost = cost_Jtilde(triple, self.target, self.T, self.pair, self.disc.n_quad)
        return _Candidate(R=R, triple=triple, jtilde=cost)

    def search(self, executor=None) -> Tuple[_Candidate, List[Tuple[float, float]]]:
        """Grid over [0, R0] plus target breakpoints, then bounded refinement around the best."""
        R0 = self.bounds.R0
        grid = np.linspace(0.0, R0, self.disc.n_R)
        extra = np.concatenate([[self.target.C], self.target.breakpoints()])
        grid = np.unique(np.concatenate([grid, extra[(extra > 0) & (extra <= R0)]]))
        cands = list(executor.map(self.candidate, grid)) if executor is not None else [self.candidate(R) for R in grid]
        costs = np.array([c.jtilde for c in cands])
        i = int(np.argmin(costs))
        best = cands[i]
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        if hi > lo:
            res = optimize.minimize_scalar(
                lambda R: self.candidate(R).jtilde,
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-6 * max(1.0, R0)},
            )
            refined = self.candidate(float(res.x))
            if refined.jtilde < best.jtilde - _TIE_TOL:
                best = refined
        table = [(c.R, c.jtilde) for c in cands]
        return best, table


@dataclass(frozen=True)
class MinimizeResult:
    triple: AdmissibleTriple
    jtilde: float
    u0: StepFn
    side: str
    bounds: Bounds
    history: Tuple[Tuple[int, float], ...]
    candidates: Tuple[Tuple[float, float], ...]
    J: Optional[JReport] = None

    def report(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "side": self.side,
            "R": self.triple.R,
            "rho": None if self.triple.rho is None else self.triple.rho.to_dict(),
            "y": self.triple.y.to_dict(),
            "Jtilde": self.jtilde,
            "J": None if self.J is None else self.J.value,
            "bounds": self.bounds.to_dict(),
            "history": [{"n_levels": n, "Jtilde": j} for n, j in self.history],
        }
        if self.J is not None:
            out["J_terms"] = self.J.terms
            out["clamp_count"] = self.J.clamp_count
        return out


def _side_search(
    target: TargetSpec, pair: FluxPair, T: float, disc: DiscSpec, executor=None
) -> Tuple[_Candidate, Bounds, List[Tuple[int, float]], List[Tuple[float, float]]]:
    bnds = bounds(target, T, pair, disc.n_quad)
    fitter = _PlusFitter(target, pair, T, bnds, disc)
    history: List[Tuple[int, float]] = []
    best, table = fitter.search(executor)
    history.append((fitter.n_cells, best.jtilde))
    for _ in range(disc.max_refine):
        fitter.n_cells *= 2
        nxt, table = fitter.search(executor)
        history.append((fitter.n_cells, nxt.jtilde))
        converged = abs(nxt.jtilde - best.jtilde) < disc.refine_tol
        if nxt.jtilde <= best.jtilde:
            best = nxt
        if converged:
            break
    else:
        if disc.max_refine:
            logger.warning(f"Сетка уровней не сошлась за {disc.max_refine} удвоений: {history}")
    zero = AdmissibleTriple.zero()
    zero_cost = cost_Jtilde(zero, target, T, pair, disc.n_quad)
    if zero_cost <= best.jtilde:
        best = _Candidate(0.0, zero, zero_cost)
    return best, bnds, history, table


def minimize(
    target: TargetSpec,
    T: float,
    pair: FluxPair,
    disc: Optional[DiscSpec] = None,
    executor=None,
    forward: bool = False,
) -> MinimizeResult:
    """
    Smallest J̃ over monotone step data on both sides, and the initial data it yields.

    Args:
        forward: also forward-solve u0* and report J
    """
    if not T > 0:
        raise InputError("minimize needs T > 0", T=T)
    disc = disc or DiscSpec()
    plus, b_plus, h_plus, tab_plus = _side_search(target, pair, T, disc, executor)
    minus, b_minus, h_minus, tab_minus = _side_search(target.mirror(), pair.mirror(), T, disc, executor)
    logger.info(f"Оптимизация: J̃+={plus.jtilde:.6g} (R={plus.R:.6g}), J̃-={minus.jtilde:.6g} (R={-minus.R:.6g})")

    if minus.jtilde < plus.jtilde - _TIE_TOL:
        side, triple, cost, bnds, history = "minus", minus.triple.mirror(), minus.jtilde, b_minus, h_minus
        table = [(-R, j) for R, j in tab_minus]
    else:
        side, triple, cost, bnds, history = "plus", plus.triple, plus.jtilde, b_plus, h_plus
        table = list(tab_plus)

    plan = backward.construct(triple.backward_spec(T), pair, N=1, executor=executor)
    report = None
    if forward:
        L = bnds.M1 + 1.0
        grid = hj_forward.GridSpec(-L, L, disc.n_forward, nt=1)
        sol = hj_forward.solve_profile(plan.u0, pair, T, grid, executor=executor)
        report = evaluate_J(sol, target)
        logger.info(f"Прямое решение: J={report.value:.6g}, J̃={cost:.6g}")
    return MinimizeResult(
        triple=triple,
        jtilde=float(cost),
        u0=plan.u0,
        side=side,
        bounds=bnds,
        history=tuple(history),
        candidates=tuple(table),
        J=report,
    )
