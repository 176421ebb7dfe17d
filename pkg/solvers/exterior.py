"""
Exterior characteristic feet y(x) and the single-flux initial data they produce.

An ExteriorMap is piecewise: constant pieces (all characteristics of the piece share one
foot) and identity pieces (y(x) = x, the state sits at the flux minimum). Outside the
listed pieces y is the identity.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from solvers.errors import InputError, SolveError
from solvers.flux import ConvexFlux
from solvers.stepfn import StepFn

logger = logging.getLogger(__name__)

_GAP_TOL = 1e-12


@dataclass(frozen=True)
class ExteriorPiece:
    lo: float
    hi: float
    kind: str  # "const" | "identity"
    value: float = 0.0

    def feet(self) -> Tuple[float, float]:
        if self.kind == "identity":
            return self.lo, self.hi
        return self.value, self.value

    def mirrored(self) -> "ExteriorPiece":
        return ExteriorPiece(-self.hi, -self.lo, self.kind, -self.value if self.kind == "const" else 0.0)


@dataclass(frozen=True)
class ExteriorMap:
    pieces: Tuple[ExteriorPiece, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.pieces, key=lambda p: p.lo))
        for p in ordered:
            if not p.lo < p.hi:
                raise InputError("exterior piece needs lo < hi", lo=p.lo, hi=p.hi)
            if p.kind not in ("const", "identity"):
                raise InputError(f"unknown exterior piece kind: {p.kind}")
        for a, b in zip(ordered[:-1], ordered[1:]):
            if b.lo < a.hi:
                raise InputError("exterior pieces overlap", at=b.lo)
        object.__setattr__(self, "pieces", ordered)

    # --- construction -----------------------------------------------------------------

    @classmethod
    def identity(cls) -> "ExteriorMap":
        return cls(())

    @classmethod
    def from_stepfn(cls, y: StepFn) -> "ExteriorMap":
        """Constant pieces inside the StepFn's domain (or between its outer breakpoints)."""
        lo, hi, vals = y.domain_pieces()
        if y.domain is None:
            lo, hi, vals = lo[1:-1], hi[1:-1], vals[1:-1]
        return cls(tuple(ExteriorPiece(float(a), float(b), "const", float(v)) for a, b, v in zip(lo, hi, vals)))

    @classmethod
    def from_callable(cls, y: Callable, intervals: Sequence[Tuple[float, float]], n: int) -> "ExteriorMap":
        """Midpoint discretisation of a callable y into n constant pieces per interval."""
        pieces: List[ExteriorPiece] = []
        for a, b in intervals:
            edges = np.linspace(a, b, n + 1)
            mids = 0.5 * (edges[:-1] + edges[1:])
            vals = np.asarray(y(mids), dtype=float)
            pieces.extend(ExteriorPiece(float(e0), float(e1), "const", float(v)) for e0, e1, v in zip(edges[:-1], edges[1:], vals))
        return cls(tuple(pieces)).merged()

    @classmethod
    def from_payload(cls, payload: Union[str, Dict[str, Any], None]) -> "ExteriorMap":
        if payload is None or payload == "identity":
            return cls.identity()
        if isinstance(payload, dict) and "pieces" in payload:
            try:
                return cls(
                    tuple(
                        ExteriorPiece(float(p["lo"]), float(p["hi"]), str(p.get("kind", "const")), float(p.get("value", 0.0)))
                        for p in payload["pieces"]
                    )
                )
            except (KeyError, TypeError, ValueError) as e:
                raise InputError(f"malformed exterior pieces: {e}")
        if isinstance(payload, dict):
            return cls.from_stepfn(StepFn.from_dict(payload))
        raise InputError("y must be 'identity', a StepFn or a piece list")

    def to_dict(self) -> Dict[str, Any]:
        return {"pieces": [{"lo": p.lo, "hi": p.hi, "kind": p.kind, "value": p.value} for p in self.pieces]}

    # --- evaluation -------------------------------------------------------------------

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        out = xa.copy()
        for p in self.pieces:
            if p.kind == "const":
                inside = (xa >= p.lo) & (xa < p.hi)
                out = np.where(inside, p.value, out)
        return float(out) if np.ndim(x) == 0 else out

    def restrict(self, lo: float, hi: float) -> List[ExteriorPiece]:
        """Pieces covering (lo, hi) in order, identity filling the holes."""
        out: List[ExteriorPiece] = []
        cursor = lo
        for p in self.pieces:
            a, b = max(p.lo, lo), min(p.hi, hi)
            if b <= a:
                continue
            if a > cursor:
                out.append(ExteriorPiece(cursor, a, "identity"))
            out.append(ExteriorPiece(a, b, p.kind, p.value))
            cursor = b
        if cursor < hi:
            out.append(ExteriorPiece(cursor, hi, "identity"))
        return out

    def mirror(self) -> "ExteriorMap":
        """y~(x) = -y(-x)."""
        return ExteriorMap(tuple(p.mirrored() for p in self.pieces))

    def merged(self) -> "ExteriorMap":
        out: List[ExteriorPiece] = []
        for p in self.pieces:
            if out and out[-1].kind == p.kind == "const" and out[-1].value == p.value and out[-1].hi == p.lo:
                out[-1] = ExteriorPiece(out[-1].lo, p.hi, "const", p.value)
            else:
                out.append(p)
        return ExteriorMap(tuple(out))

    # --- checks -----------------------------------------------------------------------

    def violations(self, R: float, rho0: Optional[float]) -> List[str]:
        """
        Plus-case admissibility: y nondecreasing, x·y(x) ≥ 0 off [0, R] and y(x) ≤ rho0 for x ≤ 0.
        """
        problems: List[str] = []
        left = self.restrict(-np.inf, 0.0)
        right = self.restrict(R, np.inf)
        cap = 0.0 if rho0 is None else min(rho0, 0.0)
        for p in left:
            top = p.hi if p.kind == "identity" else p.value
            if top > cap + _GAP_TOL * max(1.0, abs(cap)):
                problems.append("y exceeds rho(0) on x <= 0" if rho0 is not None else "x*y(x) < 0 on x < 0")
                break
        for p in right:
            bottom = p.lo if p.kind == "identity" else p.value
            if bottom < -_GAP_TOL:
                problems.append("x*y(x) < 0 on x > R")
                break
        for side in (left, right):
            for a, b in zip(side[:-1], side[1:]):
                if b.feet()[0] < a.feet()[1] - _GAP_TOL * max(1.0, abs(a.feet()[1])):
                    problems.append("y not nondecreasing")
                    break
        return problems


def exterior_transitions(
    pieces: Sequence[ExteriorPiece], flux: ConvexFlux, T: float
) -> Tuple[float, List[Tuple[float, float]], float]:
    """
    Initial data produced by the feet of `pieces` under a single flux.

    A constant piece Y over (α, β) is a centred fan at Y from (flux')⁻¹((α−Y)/T) to
    (flux')⁻¹((β−Y)/T); an identity piece holds θ. Each gap between consecutive foot ranges
    is bridged by one shock through the meeting point (x_b, T).

    Returns:
        (state left of the first foot, [(z, value) transitions], state right of the last foot)
    """
    trans: List[Tuple[float, float]] = []
    first_state: Optional[float] = None
    prev_hi: Optional[float] = None
    prev_end = flux.theta
    for p in pieces:
        f_lo, f_hi = p.feet()
        if p.kind == "identity":
            s_start = s_end = flux.theta
        else:
            s_start = float(flux.deriv_inv((p.lo - p.value) / T))
            s_end = float(flux.deriv_inv((p.hi - p.value) / T))
        if first_state is None:
            first_state = s_start
        elif f_lo - prev_hi > _GAP_TOL * max(1.0, abs(prev_hi)):
            sigma = float(flux.secant(prev_end, s_start))
            trans.append((p.lo - sigma * T, s_start))
        elif f_lo < prev_hi - _GAP_TOL * max(1.0, abs(prev_hi)):
            raise InputError("y not nondecreasing", at=p.lo)
        if p.kind == "identity":
            if np.isfinite(f_lo):
                trans.append((f_lo, flux.theta))
        else:
            trans.append((p.value, s_end))
        prev_hi, prev_end = f_hi, s_end
    if first_state is None:
        first_state = flux.theta
    return first_state, trans, prev_end


def stepfn_from_transitions(first: float, transitions: Sequence[Tuple[float, float]], tol: float = 1e-9) -> StepFn:
    """
    StepFn equal to `first` left of the first transition and to each transition value from
    its point on. Points must be nondecreasing (within tol); coincident points keep the last value.
    """
    bps: List[float] = []
    vals: List[float] = [float(first)]
    for z, v in transitions:
        if bps and z < bps[-1] - tol * max(1.0, abs(bps[-1])):
            raise SolveError("initial-data transitions out of order", at=z, previous=bps[-1])
        if bps and z <= bps[-1]:
            vals[-1] = float(v)
            continue
        bps.append(float(z))
        vals.append(float(v))
    return StepFn(np.array(bps), np.array(vals)).merged()
