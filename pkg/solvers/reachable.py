"""
Reachable profiles at time T and the exact controller that attains them.

A plus-side profile (block (0, R), R > 0) reads

    W = (g')⁻¹((x − y)/T) on [C1, 0],  (f')⁻¹(x/(T − t)) on [0, R],  (f')⁻¹((x − y)/T) on [R, C2]

with −ρ/t = h₊(x/(T − t)); the minus side is its mirror image. Membership inverts these
formulas on a sample grid and checks the order and range constraints on (y, ρ, t).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from solvers import backward, hj_forward
from solvers.errors import InputError
from solvers.exterior import ExteriorMap, ExteriorPiece
from solvers.flux import ConvexFlux, FluxPair
from solvers.rootfind import bisect_scalar
from solvers.stepfn import StepFn

logger = logging.getLogger(__name__)

Profile = Callable[[np.ndarray], np.ndarray]

MEMBER_TOL = 1e-8
R_SCAN = 64
SPEED_MARGIN = 1.1

# Порядок проверок определяет, какое нарушение попадёт в отчёт
VIOLATIONS = (
    "W outside the invertibility range",
    "t outside (0, T)",
    "y not nondecreasing",
    "x*y(x) < 0",
    "y exceeds rho(0) on x <= 0",
    "rho not nondecreasing",
    "t not decreasing",
    "rho outside [B1 - delta, 0]",
    "y outside [B1 + delta, B2 - delta]",
)


@dataclass(frozen=True)
class ReachSpec:
    T: float
    C1: float
    C2: float
    B1: float
    B2: float
    exterior: StepFn = field(default_factory=lambda: StepFn.constant(0.0))
    delta: Optional[float] = None
    R: Optional[float] = None

    def __post_init__(self):
        if not self.T > 0:
            raise InputError("reach spec needs T > 0", T=self.T)
        if not self.C1 < 0 < self.C2:
            raise InputError("reach spec needs C1 < 0 < C2", C1=self.C1, C2=self.C2)
        if not self.B1 < 0 < self.B2:
            raise InputError("reach spec needs B1 < 0 < B2", B1=self.B1, B2=self.B2)
        if self.delta is None:
            object.__setattr__(self, "delta", (self.B2 - self.B1) / 100.0)
        if not self.delta > 0 or not (self.B1 + self.delta < 0 < self.B2 - self.delta):
            raise InputError("reach spec needs delta > 0 with B1 + delta < 0 < B2 - delta", delta=self.delta)
        if self.R is not None and not self.C1 < self.R < self.C2:
            raise InputError("reach spec needs C1 < R < C2", R=self.R)

    def mirror(self) -> "ReachSpec":
        return ReachSpec(
            T=self.T,
            C1=-self.C2,
            C2=-self.C1,
            B1=-self.B2,
            B2=-self.B1,
            exterior=self.exterior.reflected(),
            delta=self.delta,
            R=None if self.R is None else -self.R,
        )

    @property
    def P1(self) -> float:
        return min(self.C1, self.B1) - (self.C2 - self.C1) / 10.0

    @property
    def P2(self) -> float:
        return max(self.C2, self.B2) + (self.C2 - self.C1) / 10.0

    def exterior_bounds(self, side: str) -> Tuple[float, float]:
        """Essential (min, max) of the prescribed data on x ≤ B1 ('left') or x ≥ B2 ('right')."""
        lo, hi, vals = self.exterior.pieces()
        if side == "left":
            keep = lo < self.B1
        else:
            keep = hi > self.B2
        v = vals[keep]
        return float(v.min()), float(v.max())

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "ReachSpec":
        try:
            ext = payload.get("exterior")
            return cls(
                T=float(payload["T"]),
                C1=float(payload["C1"]),
                C2=float(payload["C2"]),
                B1=float(payload["B1"]),
                B2=float(payload["B2"]),
                exterior=StepFn.constant(0.0) if ext is None else StepFn.from_dict(ext),
                delta=None if payload.get("delta") is None else float(payload["delta"]),
                R=None if payload.get("R") is None else float(payload["R"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed reach spec: {e}")


@dataclass(frozen=True)
class ReachWitness:
    """Recovered data on the sample grid, in the physical frame."""

    side: str
    R: float
    x_left: np.ndarray
    y_left: np.ndarray
    x_block: np.ndarray
    t: np.ndarray
    rho: np.ndarray
    x_right: np.ndarray
    y_right: np.ndarray

    def mirrored(self) -> "ReachWitness":
        return ReachWitness(
            side="minus" if self.side == "plus" else "plus",
            R=-self.R,
            x_left=-self.x_right[::-1],
            y_left=-self.y_right[::-1],
            x_block=-self.x_block[::-1],
            t=self.t[::-1].copy(),
            rho=-self.rho[::-1],
            x_right=-self.x_left[::-1],
            y_right=-self.y_left[::-1],
        )

    def rho_fn(self) -> Optional[Callable[[np.ndarray], np.ndarray]]:
        if self.x_block.size == 0:
            return None
        xb, rb = self.x_block, self.rho
        return lambda x: np.interp(np.asarray(x, dtype=float), xb, rb)

    def y_map(self, n: int, C1: float, C2: float) -> ExteriorMap:
        """
        Exterior feet as n constant pieces on each exterior interval inside [C1, C2],
        continued by a constant until the identity takes over.
        """
        pieces: List[ExteriorPiece] = []
        spans = ((C1, min(self.R, 0.0), self.x_left, self.y_left), (max(self.R, 0.0), C2, self.x_right, self.y_right))
        for lo, hi, xs, ys in spans:
            if xs.size == 0 or not hi > lo:
                continue
            edges = np.linspace(lo, hi, n + 1)
            vals = np.interp(0.5 * (edges[:-1] + edges[1:]), xs, ys)
            pieces += [ExteriorPiece(float(a), float(b), "const", float(v)) for a, b, v in zip(edges[:-1], edges[1:], vals)]
        if self.x_left.size and self.y_left[0] < C1:
            pieces.append(ExteriorPiece(float(self.y_left[0]), C1, "const", float(self.y_left[0])))
        if self.x_right.size and self.y_right[-1] > C2:
            pieces.append(ExteriorPiece(C2, float(self.y_right[-1]), "const", float(self.y_right[-1])))
        return ExteriorMap(tuple(pieces)).merged()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "side": self.side,
            "R": self.R,
            "x_left": self.x_left.tolist(),
            "y_left": self.y_left.tolist(),
            "x_block": self.x_block.tolist(),
            "t": self.t.tolist(),
            "rho": self.rho.tolist(),
            "x_right": self.x_right.tolist(),
            "y_right": self.y_right.tolist(),
        }


@dataclass(frozen=True)
class ReachTarget:
    W: Profile
    side: Optional[str] = None
    witness: Optional[ReachWitness] = None

    @classmethod
    def from_samples(cls, x: Sequence[float], w: Sequence[float]) -> "ReachTarget":
        xa, wa = np.asarray(x, dtype=float), np.asarray(w, dtype=float)
        if xa.size < 2 or np.any(np.diff(xa) <= 0):
            raise InputError("profile samples need strictly increasing x")
        return cls(lambda z: np.interp(np.asarray(z, dtype=float), xa, wa))

    @classmethod
    def from_stepfn(cls, w: StepFn) -> "ReachTarget":
        return cls(w)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    side: Optional[str]
    R: Optional[float]
    witness: Optional[ReachWitness] = None
    violation: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"member": self.member, "side": self.side, "R": self.R}
        if self.member and self.witness is not None:
            out["witness"] = self.witness.to_dict()
        else:
            out["violation"] = self.violation
        return out


# --- generator -------------------------------------------------------------------------------


def profile_from_witness(
    side: str,
    R: float,
    rho: Optional[Callable[[np.ndarray], np.ndarray]],
    y: Callable[[np.ndarray], np.ndarray],
    T: float,
    pair: FluxPair,
) -> Profile:
    """W built from (R, ρ, y); side 'minus' takes R < 0 and physical-frame ρ ≥ 0."""
    if side == "minus":
        inner = profile_from_witness(
            "plus",
            -R,
            None if rho is None else (lambda x: -np.asarray(rho(-np.asarray(x, dtype=float)), dtype=float)),
            lambda x: -np.asarray(y(-np.asarray(x, dtype=float)), dtype=float),
            T,
            pair.mirror(),
        )
        return lambda x: -np.asarray(inner(-np.asarray(x, dtype=float)), dtype=float)
    if R > 0 and rho is None:
        raise InputError("a plus-side witness with R > 0 needs rho")

    def W(x):
        xa = np.asarray(x, dtype=float)
        slope = (xa - np.asarray(y(xa), dtype=float)) / T
        out = np.where(xa <= 0, pair.g.deriv_inv(slope), pair.f.deriv_inv(slope)).astype(float)
        block = (xa > 0) & (xa < R)
        if np.any(block):
            xb = xa[block]
            t = backward.tmap_array(pair, xb, np.minimum(rho(xb), 0.0), T)
            out[block] = pair.f.deriv_inv(xb / (T - t))
        return float(out) if np.ndim(x) == 0 else out

    return W


# --- membership ------------------------------------------------------------------------------


def _midpoints(lo: float, hi: float, n: int) -> np.ndarray:
    if not hi > lo:
        return np.empty(0)
    e = np.linspace(lo, hi, n + 1)
    return 0.5 * (e[:-1] + e[1:])


def _estimate_R(W: Profile, spec: ReachSpec, pair: FluxPair, n: int) -> float:
    """End of the block: where x − T·f'(W(x)) stops being negative on (0, C2)."""
    xs = _midpoints(0.0, spec.C2, n)
    d = xs - spec.T * pair.f.deriv(np.asarray(W(xs), dtype=float))
    neg = np.flatnonzero(d < 0)
    if neg.size == 0:
        return 0.0
    i = int(neg[-1])
    lo, hi = float(xs[i]), float(xs[i + 1]) if i + 1 < xs.size else spec.C2
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid - spec.T * float(pair.f.deriv(float(np.asarray(W(np.array([mid])))[0]))) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _check_plus(W: Profile, spec: ReachSpec, pair: FluxPair, R: float, n: int) -> Tuple[Optional[str], ReachWitness]:
    """First violated constraint (or None) and the recovered data for a plus-side block (0, R)."""
    T, tol = spec.T, MEMBER_TOL
    x_left = _midpoints(spec.C1, 0.0, n)
    x_block = _midpoints(0.0, R, n)
    x_right = _midpoints(R, spec.C2, n)
    with np.errstate(all="ignore"):
        y_left = x_left - T * pair.g.deriv(np.asarray(W(x_left), dtype=float))
        y_right = x_right - T * pair.f.deriv(np.asarray(W(x_right), dtype=float))
        s = pair.f.deriv(np.asarray(W(x_block), dtype=float)) if x_block.size else np.empty(0)
        t = T - x_block / s if x_block.size else np.empty(0)
    witness = ReachWitness("plus", R, x_left, y_left, x_block, np.asarray(t), np.empty(0), x_right, y_right)

    if not (np.all(np.isfinite(y_left)) and np.all(np.isfinite(y_right)) and np.all(np.isfinite(s))):
        return VIOLATIONS[0], witness
    if x_block.size and np.any(s <= max(pair.iplus_lo, 0.0) + tol):
        return VIOLATIONS[0], witness
    if x_block.size and (np.any(t <= tol * T) or np.any(t >= T * (1.0 - tol))):
        return VIOLATIONS[1], witness
    rho = -t * pair.h_plus(s) if x_block.size else np.empty(0)
    witness = ReachWitness("plus", R, x_left, y_left, x_block, t, rho, x_right, y_right)

    if np.any(np.diff(y_left) < -tol) or np.any(np.diff(y_right) < -tol):
        return VIOLATIONS[2], witness
    if np.any(y_left > tol) or np.any(y_right < -tol):
        return VIOLATIONS[3], witness
    if rho.size and y_left.size and np.max(y_left) > rho[0] + tol:
        return VIOLATIONS[4], witness
    if np.any(np.diff(rho) < -tol):
        return VIOLATIONS[5], witness
    if np.any(np.diff(t) > tol):
        return VIOLATIONS[6], witness
    if rho.size and (np.min(rho) < spec.B1 - spec.delta - tol or np.max(rho) > tol):
        return VIOLATIONS[7], witness
    ys = np.concatenate([y_left, y_right])
    if ys.size and (np.min(ys) < spec.B1 + spec.delta - tol or np.max(ys) > spec.B2 - spec.delta + tol):
        return VIOLATIONS[8], witness
    return None, witness


def _scan_plus(W: Profile, spec: ReachSpec, pair: FluxPair, n: int, R_fixed: Optional[float]) -> MembershipResult:
    if R_fixed is not None:
        candidates = [R_fixed]
    else:
        est = _estimate_R(W, spec, pair, n)
        candidates = [est] + [float(r) for r in np.linspace(0.0, spec.C2, R_SCAN, endpoint=False) if r != est]
    first_violation: Optional[str] = None
    for R in candidates:
        problem, witness = _check_plus(W, spec, pair, R, n)
        if problem is None:
            return MembershipResult(True, "plus", R, witness)
        first_violation = first_violation or problem
    return MembershipResult(False, "plus", candidates[0], violation=first_violation)


def membership(
    W: Profile,
    spec: ReachSpec,
    pair: FluxPair,
    grid: int = 400,
    side: Optional[str] = None,
    executor=None,
) -> MembershipResult:
    """
    Decides whether W is reachable at T, returning the recovered witness on success and the
    first violated constraint otherwise.
    """
    if grid < 2:
        raise InputError("membership needs grid >= 2", grid=grid)
    if spec.R is not None:
        side = "minus" if spec.R < 0 else "plus"
    sides = [side] if side else ["plus", "minus"]
    mirrored_spec = spec.mirror()

    def W_m(x):
        return -np.asarray(W(-np.asarray(x, dtype=float)), dtype=float)

    def run(s: str) -> MembershipResult:
        if s == "plus":
            return _scan_plus(W, spec, pair, grid, spec.R)
        res = _scan_plus(W_m, mirrored_spec, pair.mirror(), grid, mirrored_spec.R)
        return MembershipResult(
            res.member,
            "minus",
            None if res.R is None else -res.R,
            None if res.witness is None else res.witness.mirrored(),
            res.violation,
        )

    results = list(executor.map(run, sides)) if executor is not None else [run(s) for s in sides]
    for res in results:
        if res.member:
            logger.info(f"Профиль достижим: сторона={res.side}, R={res.R:.6g}")
            return res
    logger.info(f"Профиль недостижим: {results[0].violation}")
    return results[0]


# --- free regions and the exact controller -----------------------------------------------------


def free_region_lambda(
    flux: ConvexFlux,
    exterior: Union[float, Tuple[float, float]],
    B: float,
    P: float,
    T: float,
    side: str = "right",
) -> float:
    """
    Buffer state λ whose shock against the prescribed data moves at least
    1.1·(P − B)/T, so the triangle between (B, 0) and (P, T) stays clean.

    Args:
        exterior: essential bound m, or (inf, sup) of the prescribed data on that side
    """
    m_lo, m_hi = (float(exterior), float(exterior)) if np.ndim(exterior) == 0 else map(float, exterior)
    if not T > 0:
        raise InputError("free_region_lambda needs T > 0", T=T)
    if side == "left":
        return -free_region_lambda(flux.reflected(), (-m_hi, -m_lo), -B, -P, T, "right")
    if side != "right":
        raise InputError(f"unknown side: {side}")
    if not 0 < B < P:
        raise InputError("right free region needs 0 < B < P", B=B, P=P)
    speed = SPEED_MARGIN * (P - B) / T

    def excess(lam: float) -> float:
        return float(flux.secant(lam, m_lo)) - speed

    lo, hi = m_lo - 1.0, m_lo + 1.0
    lam = bisect_scalar(excess, lo, hi, direction="down" if excess(lo) > 0 else "up")
    if lam <= m_hi:
        # ударная волна должна удовлетворять условию энтропии: λ выше внешних данных
        lam = m_hi + 1.0
    logger.debug(f"Буфер свободной области: λ={lam:.6g}, скорость >= {speed:.6g}")
    return float(lam)


def _restrict(fn: StepFn, lo: float, hi: float) -> List[Tuple[float, float, float]]:
    a, b, v = fn.pieces()
    a, b = np.clip(a, lo, hi), np.clip(b, lo, hi)
    keep = b > a
    return list(zip(a[keep], b[keep], v[keep]))


def splice_initial_data(spec: ReachSpec, inner: StepFn, lam1: float, lam2: float) -> StepFn:
    """ū₀ off (B1, B2), λ1 on (B1, B1 + δ), λ2 on (B2 − δ, B2) and `inner` in between."""
    d = spec.delta
    parts = _restrict(spec.exterior, -np.inf, spec.B1)
    parts.append((spec.B1, spec.B1 + d, lam1))
    parts += _restrict(inner, spec.B1 + d, spec.B2 - d)
    parts.append((spec.B2 - d, spec.B2, lam2))
    parts += _restrict(spec.exterior, spec.B2, np.inf)
    bps = np.array([p[0] for p in parts[1:]])
    vals = np.array([p[2] for p in parts])
    return StepFn(bps, vals).merged()


@dataclass(frozen=True)
class ExactControlResult:
    u0: StepFn
    sol: hj_forward.SolutionField
    l1_error: float
    lambdas: Tuple[float, float]
    membership: MembershipResult
    plan: backward.BackwardPlan

    def report(self) -> Dict[str, Any]:
        return {
            "member": True,
            "side": self.membership.side,
            "R": self.membership.R,
            "l1_error": self.l1_error,
            "lambda1": self.lambdas[0],
            "lambda2": self.lambdas[1],
            "plan": self.plan.summary(),
        }


def exact_control(
    target: ReachTarget,
    spec: ReachSpec,
    pair: FluxPair,
    N: int = 64,
    grid: int = 400,
    nx: int = 401,
    executor=None,
) -> ExactControlResult:
    """Initial data that reaches target.W on (C1, C2) at T while honouring ū₀ off (B1, B2)."""
    res = membership(target.W, spec, pair, grid=grid, side=target.side, executor=executor)
    if not res.member:
        raise InputError(f"target is not reachable: {res.violation}", side=res.side, R=res.R)
    witness = target.witness or res.witness

    bspec = backward.BackwardSpec(T=spec.T, R=witness.R, rho=witness.rho_fn(), y=witness.y_map(max(4 * N, 64), spec.C1, spec.C2))
    plan = backward.construct(bspec, pair, N, executor=executor)

    lam1 = free_region_lambda(pair.g, spec.exterior_bounds("left"), spec.B1, spec.P1, spec.T, "left")
    lam2 = free_region_lambda(pair.f, spec.exterior_bounds("right"), spec.B2, spec.P2, spec.T, "right")
    u0 = splice_initial_data(spec, plan.u0, lam1, lam2)

    sol = hj_forward.solve_profile(u0, pair, spec.T, hj_forward.GridSpec(spec.C1, spec.C2, nx, nt=1), executor=executor)
    x = sol.x_grid[1:-1]
    err = hj_forward.l1_distance(x, sol.u[1:-1], np.asarray(target.W(x), dtype=float))
    logger.info(f"Точное управление: N={N}, L1={err:.3e}, λ1={lam1:.4g}, λ2={lam2:.4g}")
    return ExactControlResult(u0=u0, sol=sol, l1_error=err, lambdas=(lam1, lam2), membership=res, plan=plan)
