"""
Finitely piecewise-constant functions.

A StepFn with breakpoints b_0 < ... < b_{n-1} has n+1 values: values[0] on (-inf, b_0),
values[i] on [b_{i-1}, b_i) and values[n] on [b_{n-1}, inf). It is right-continuous.
An optional `domain` (lo, hi) records that only [lo, hi] is meaningful (rho on [0, R]);
evaluation outside it extends the end values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from solvers.errors import InputError


@dataclass(frozen=True)
class StepFn:
    breakpoints: np.ndarray
    values: np.ndarray
    domain: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float).reshape(-1)
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if vals.size != bp.size + 1:
            raise InputError(
                "StepFn needs one more value than breakpoints",
                breakpoints=bp.size,
                values=vals.size,
            )
        if bp.size and np.any(np.diff(bp) <= 0):
            raise InputError("StepFn breakpoints must be strictly increasing")
        if not (np.all(np.isfinite(bp)) and np.all(np.isfinite(vals))):
            raise InputError("StepFn breakpoints and values must be finite")
        if self.domain is not None:
            lo, hi = float(self.domain[0]), float(self.domain[1])
            if not lo <= hi:
                raise InputError("StepFn domain must satisfy lo <= hi", lo=lo, hi=hi)
            object.__setattr__(self, "domain", (lo, hi))
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    # --- construction -----------------------------------------------------------------

    @classmethod
    def constant(cls, value: float, domain: Optional[Tuple[float, float]] = None) -> "StepFn":
        return cls(np.empty(0), np.array([value], dtype=float), domain)

    @classmethod
    def from_cells(cls, edges: Sequence[float], values: Sequence[float]) -> "StepFn":
        """Interval-domain StepFn from cell edges e_0 < ... < e_n and n cell values."""
        edges = np.asarray(edges, dtype=float)
        values = np.asarray(values, dtype=float)
        if edges.size != values.size + 1:
            raise InputError("cells need len(edges) == len(values) + 1")
        return cls(edges[1:-1], values, (float(edges[0]), float(edges[-1]))).merged()

    @classmethod
    def from_dict(cls, payload: dict) -> "StepFn":
        """
        Reads the StepFnFile layout.

        For an interval domain the file lists the left end of every piece as a breakpoint
        (equal counts); for the real line there is one more value than breakpoints.
        """
        try:
            bp = [float(b) for b in payload.get("breakpoints", [])]
            vals = [float(v) for v in payload["values"]]
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed StepFn payload: {e}")
        domain = payload.get("domain")
        if domain is None:
            return cls(np.array(bp), np.array(vals))
        lo, hi = float(domain[0]), float(domain[1])
        if len(vals) == len(bp):
            if not bp or bp[0] != lo:
                raise InputError("interval StepFn must start its breakpoints at the domain start")
            return cls(np.array(bp[1:]), np.array(vals), (lo, hi))
        return cls(np.array(bp), np.array(vals), (lo, hi))

    def to_dict(self) -> dict:
        if self.domain is None:
            return {"breakpoints": self.breakpoints.tolist(), "values": self.values.tolist()}
        lo, hi = self.domain
        inside = (self.breakpoints > lo) & (self.breakpoints < hi)
        starts = [lo] + self.breakpoints[inside].tolist()
        vals = [float(self(lo))] + self.values[1:][inside].tolist()
        return {"breakpoints": starts, "values": vals, "domain": [lo, hi]}

    # --- evaluation -------------------------------------------------------------------

    def __call__(self, x):
        idx = np.searchsorted(self.breakpoints, x, side="right")
        out = self.values[idx]
        return float(out) if np.ndim(x) == 0 else out

    def left_limit(self, x):
        idx = np.searchsorted(self.breakpoints, x, side="left")
        out = self.values[idx]
        return float(out) if np.ndim(x) == 0 else out

    @property
    def n_pieces(self) -> int:
        return self.values.size

    def pieces(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Arrays (lo, hi, value) of all pieces; the outer ends are -inf/+inf."""
        lo = np.concatenate([[-np.inf], self.breakpoints])
        hi = np.concatenate([self.breakpoints, [np.inf]])
        return lo, hi, self.values.copy()

    def domain_pieces(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Pieces clipped to the domain, zero-width pieces dropped."""
        lo, hi, vals = self.pieces()
        if self.domain is None:
            return lo, hi, vals
        a, b = self.domain
        lo, hi = np.clip(lo, a, b), np.clip(hi, a, b)
        keep = hi > lo
        if not np.any(keep):
            return np.array([a]), np.array([b]), np.array([self(a)])
        return lo[keep], hi[keep], vals[keep]

    def min(self) -> float:
        return float(self.domain_pieces()[2].min())

    def max(self) -> float:
        return float(self.domain_pieces()[2].max())

    def is_nondecreasing(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.diff(self.domain_pieces()[2]) >= -tol))

    def total_variation(
        self,
        lo: float = -np.inf,
        hi: float = np.inf,
        transform: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ) -> float:
        """Sum of |jumps| of transform(self) at breakpoints strictly inside (lo, hi)."""
        vals = self.values if transform is None else np.asarray(transform(self.values))
        inside = (self.breakpoints > lo) & (self.breakpoints < hi)
        jumps = np.abs(np.diff(vals))[inside]
        return float(jumps.sum())

    # --- transforms -------------------------------------------------------------------

    def merged(self) -> "StepFn":
        """Drops breakpoints where the value does not change."""
        if self.breakpoints.size == 0:
            return self
        keep = self.values[1:] != self.values[:-1]
        vals = np.concatenate([self.values[:1], self.values[1:][keep]])
        return StepFn(self.breakpoints[keep], vals, self.domain)

    def reflected(self, negate: bool = True) -> "StepFn":
        """x -> -x (and u -> -u when negate)."""
        sign = -1.0 if negate else 1.0
        bp = -self.breakpoints[::-1]
        vals = sign * self.values[::-1]
        dom = None if self.domain is None else (-self.domain[1], -self.domain[0])
        return StepFn(bp, vals, dom)

    def map_values(self, fn: Callable[[np.ndarray], np.ndarray]) -> "StepFn":
        return StepFn(self.breakpoints, np.asarray(fn(self.values), dtype=float), self.domain)

    def primitive(self) -> "StepPrimitive":
        return StepPrimitive(self)


@dataclass(frozen=True)
class StepPrimitive:
    """
    Exact primitive v0(x) = int_0^x u0 of a StepFn, piecewise linear.

    `pieces()` exposes each linear piece as (lo, hi, slope, anchor, value_at_anchor)
    so that minimisation problems over y can be solved piece by piece.
    """

    u0: StepFn
    _anchor: np.ndarray = field(init=False, repr=False)
    _anchor_value: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        lo, hi, vals = self.u0.pieces()
        bp = self.u0.breakpoints
        if bp.size == 0:
            anchor = np.array([0.0])
            anchor_value = np.array([0.0])
        else:
            # cumulative integral from the first breakpoint
            cum = np.concatenate([[0.0], np.cumsum(vals[1:-1] * np.diff(bp))])
            offset = _eval_cumulative(0.0, bp, vals, cum)
            anchor = np.concatenate([[bp[0]], bp])
            anchor_value = np.concatenate([[cum[0]], cum]) - offset
        object.__setattr__(self, "_anchor", anchor)
        object.__setattr__(self, "_anchor_value", anchor_value)

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.u0.breakpoints, xa, side="right")
        out = self._anchor_value[idx] + self.u0.values[idx] * (xa - self._anchor[idx])
        return float(out) if np.ndim(x) == 0 else out

    def pieces(self):
        lo, hi, vals = self.u0.pieces()
        return lo, hi, vals, self._anchor, self._anchor_value


def _eval_cumulative(x: float, bp: np.ndarray, vals: np.ndarray, cum: np.ndarray) -> float:
    idx = int(np.searchsorted(bp, x, side="right"))
    if idx == 0:
        return float(vals[0] * (x - bp[0]))
    return float(cum[idx - 1] + vals[idx] * (x - bp[idx - 1]))
