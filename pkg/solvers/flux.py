"""
Strictly convex fluxes and the interface-coupled pair (f, g).

g acts on x < 0, f on x > 0. All maps accept scalars or numpy arrays.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np
from scipy import optimize
from scipy.interpolate import PchipInterpolator

from solvers.errors import DomainError, InputError
from solvers.rootfind import DEFAULT_TOL, bisect_array

logger = logging.getLogger(__name__)

# Допуск сравнения значений потока (проверки области определения)
VALUE_TOL = 1e-10
# Значения в пределах округления над минимумом обращаются точно в θ
BRANCH_SNAP_TOL = 1e3 * np.finfo(float).eps


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else np.asarray(x, dtype=float)


class ConvexFlux(ABC):
    """One strictly convex, superlinear C¹ flux."""

    kind: str = "abstract"

    @abstractmethod
    def __call__(self, u): ...

    @abstractmethod
    def deriv(self, u): ...

    @abstractmethod
    def deriv_inv(self, p): ...

    @property
    @abstractmethod
    def theta(self) -> float: ...

    @abstractmethod
    def reflected(self) -> "ConvexFlux":
        """The flux u -> self(-u)."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]: ...

    def eval(self, u):
        return self(u)

    @property
    def min_value(self) -> float:
        return float(self(self.theta))

    def dual(self, p):
        """Convex dual sup_u (p·u − flux(u)) = p·u* − flux(u*), u* = (flux')⁻¹(p)."""
        u = self.deriv_inv(p)
        return _out(np.asarray(p) * u - self(u), p)

    def inv_branch(self, side: str, v):
        """Inverse of the flux on [θ, ∞) (side='plus') or (−∞, θ] (side='minus')."""
        if side not in ("plus", "minus"):
            raise InputError(f"unknown branch side: {side}")
        va = np.asarray(v, dtype=float)
        if np.any(va < self.min_value - VALUE_TOL):
            raise DomainError(
                "branch inverse below the flux minimum",
                v=float(np.min(va)),
                min_value=self.min_value,
            )
        return _out(self._snapped_branch(side, va), v)

    def inv_branch_clamped(self, side: str, v):
        """inv_branch with values below the minimum mapped to θ."""
        return _out(self._snapped_branch(side, np.asarray(v, dtype=float)), v)

    def _snapped_branch(self, side: str, va: np.ndarray) -> np.ndarray:
        m = self.min_value
        snap = va <= m + BRANCH_SNAP_TOL * max(1.0, abs(m))
        root = self._inv_branch(side, np.maximum(va, m))
        return np.where(snap, self.theta, root)

    @abstractmethod
    def _inv_branch(self, side: str, v: np.ndarray) -> np.ndarray: ...

    def secant(self, a, b):
        """Shock speed (flux(a) − flux(b)) / (a − b), flux' at a == b."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        close = np.abs(a - b) <= 1e-12 * np.maximum(1.0, np.abs(a))
        denom = np.where(close, 1.0, a - b)
        sec = np.where(close, self.deriv(0.5 * (a + b)), (self(a) - self(b)) / denom)
        return float(sec) if sec.ndim == 0 else sec

    def check_invariants(self, grid: np.ndarray | None = None) -> List[str]:
        """Returns a list of violated flux properties on a sample grid (empty when valid)."""
        if grid is None:
            span = max(10.0, 4.0 * abs(self.theta))
            grid = np.linspace(self.theta - span, self.theta + span, 2001)
        problems = []
        d = self.deriv(grid)
        if np.any(np.diff(d) <= 0):
            problems.append("derivative not strictly increasing")
        if np.any(self(grid) < self.min_value - VALUE_TOL):
            problems.append("theta is not the minimiser")
        slope_bound = float(np.max(np.abs(d)))
        for r in (1e2, 1e4):
            for u in (self.theta + r, self.theta - r):
                if not self(u) / abs(u) > slope_bound:
                    problems.append(f"superlinear growth not observed at |u|={r:g}")
                    break
        return problems

    @staticmethod
    def from_dict(payload: Dict[str, Any]) -> "ConvexFlux":
        kind = (payload or {}).get("kind")
        if kind == "quadratic":
            return QuadraticFlux(
                a=float(payload.get("a", 0.5)),
                b=float(payload.get("b", 0.0)),
                c=float(payload.get("c", 0.0)),
            )
        if kind == "tabulated":
            samples = payload.get("samples")
            if not samples:
                raise InputError("tabulated flux needs 'samples'")
            return TabulatedFlux.from_samples(samples)
        raise InputError(f"unknown flux kind: {kind!r}")


@dataclass(frozen=True)
class QuadraticFlux(ConvexFlux):
    """a·u² + b·u + c with a > 0; all inverses in closed form."""

    a: float = 0.5
    b: float = 0.0
    c: float = 0.0
    kind: str = field(default="quadratic", init=False)

    def __post_init__(self):
        if not (np.isfinite(self.a) and self.a > 0):
            raise InputError("quadratic flux needs a > 0", a=self.a)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        return _out(self.a * u * u + self.b * u + self.c, u)

    def deriv(self, u):
        u = np.asarray(u, dtype=float)
        return _out(2.0 * self.a * u + self.b, u)

    def deriv_inv(self, p):
        p = np.asarray(p, dtype=float)
        return _out((p - self.b) / (2.0 * self.a), p)

    @property
    def theta(self) -> float:
        return -self.b / (2.0 * self.a)

    def _inv_branch(self, side: str, v: np.ndarray) -> np.ndarray:
        root = np.sqrt(np.maximum(v - self.min_value, 0.0) / self.a)
        return self.theta + root if side == "plus" else self.theta - root

    def reflected(self) -> "QuadraticFlux":
        return QuadraticFlux(self.a, -self.b, self.c)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "quadratic", "a": self.a, "b": self.b, "c": self.c}


class TabulatedFlux(ConvexFlux):
    """
    Shape-preserving cubic (PCHIP) interpolation of strictly convex samples.

    Past the sample range the flux continues as the C¹ quadratic whose curvature is the
    last secant-slope increment, so superlinear growth holds everywhere.
    Strict convexity is validated at construction.
    """

    kind = "tabulated"

    def __init__(self, u: Sequence[float], values: Sequence[float]):
        u = np.asarray(u, dtype=float)
        values = np.asarray(values, dtype=float)
        if u.size < 4 or u.size != values.size:
            raise InputError("tabulated flux needs at least 4 (u, f) samples")
        order = np.argsort(u)
        u, values = u[order], values[order]
        if np.any(np.diff(u) <= 0):
            raise InputError("tabulated flux samples need distinct u")
        slopes = np.diff(values) / np.diff(u)
        if np.any(np.diff(slopes) <= 0):
            raise InputError("tabulated flux samples are not strictly convex")
        self._u = u
        self._f = values
        self._interp = PchipInterpolator(u, values, extrapolate=False)
        self._dinterp = self._interp.derivative()
        self._lo, self._hi = float(u[0]), float(u[-1])
        self._d_lo = float(self._dinterp(self._lo))
        self._d_hi = float(self._dinterp(self._hi))
        self._k_lo = float((slopes[1] - slopes[0]) / (u[2] - u[0]) * 2.0)
        self._k_hi = float((slopes[-1] - slopes[-2]) / (u[-1] - u[-3]) * 2.0)
        self._theta = self._find_theta()
        grid = np.linspace(self._lo, self._hi, 40 * u.size)
        if np.any(np.diff(self.deriv(grid)) <= 0):
            raise InputError("interpolated tabulated flux is not strictly convex")
        logger.debug(f"Табличный поток: {u.size} точек, θ={self._theta:.12g}")

    @classmethod
    def from_samples(cls, samples: Sequence[Sequence[float]]) -> "TabulatedFlux":
        try:
            arr = np.asarray(samples, dtype=float)
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed flux samples: {e}")
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InputError("flux samples must be [[u, f], ...]")
        return cls(arr[:, 0], arr[:, 1])

    def _find_theta(self) -> float:
        i = int(np.argmin(self._f))
        if i == 0 or i == self._u.size - 1:
            raise InputError("tabulated flux minimum must lie inside the sample range")
        res = optimize.minimize_scalar(
            self.__call__,
            bracket=(self._u[i - 1], self._u[i], self._u[i + 1]),
            method="golden",
            tol=DEFAULT_TOL,
        )
        return float(res.x)

    def __call__(self, u):
        ua = np.asarray(u, dtype=float)
        inside = np.clip(ua, self._lo, self._hi)
        out = np.asarray(self._interp(inside), dtype=float)
        dl = ua - self._lo
        dh = ua - self._hi
        left = self._f[0] + self._d_lo * dl + 0.5 * self._k_lo * dl * dl
        right = self._f[-1] + self._d_hi * dh + 0.5 * self._k_hi * dh * dh
        out = np.where(ua < self._lo, left, np.where(ua > self._hi, right, out))
        return _out(out, u)

    def deriv(self, u):
        ua = np.asarray(u, dtype=float)
        inside = np.clip(ua, self._lo, self._hi)
        out = np.asarray(self._dinterp(inside), dtype=float)
        left = self._d_lo + self._k_lo * (ua - self._lo)
        right = self._d_hi + self._k_hi * (ua - self._hi)
        out = np.where(ua < self._lo, left, np.where(ua > self._hi, right, out))
        return _out(out, u)

    def deriv_inv(self, p):
        pa = np.atleast_1d(np.asarray(p, dtype=float))
        lo = np.full_like(pa, self._lo)
        hi = np.full_like(pa, self._hi)
        # Вне таблицы производная аффинна: обращаем явно
        below = pa < self._d_lo
        above = pa > self._d_hi
        lo = np.where(below, self._lo + (pa - self._d_lo) / self._k_lo - 1.0, lo)
        hi = np.where(above, self._hi + (pa - self._d_hi) / self._k_hi + 1.0, hi)
        root = bisect_array(lambda u: self.deriv(u) - pa, lo, hi)
        return _out(root.reshape(np.shape(p)), p)

    @property
    def theta(self) -> float:
        return self._theta

    def _inv_branch(self, side: str, v: np.ndarray) -> np.ndarray:
        va = np.atleast_1d(v)
        theta = np.full_like(va, self._theta)
        step = max(1.0, self._hi - self._lo)
        far = theta + step if side == "plus" else theta - step
        for _ in range(200):
            short = self(far) < va
            if not np.any(short):
                break
            step *= 2.0
            far = np.where(short, theta + step if side == "plus" else theta - step, far)
        lo, hi = (theta, far) if side == "plus" else (far, theta)
        root = bisect_array(lambda u: self(u) - va, lo, hi)
        root = np.where(va <= self.min_value, self._theta, root)
        return root.reshape(np.shape(v))

    def reflected(self) -> "TabulatedFlux":
        return TabulatedFlux(-self._u[::-1], self._f[::-1])

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "tabulated", "samples": np.column_stack([self._u, self._f]).tolist()}

    def __repr__(self) -> str:
        return f"TabulatedFlux(n={self._u.size}, theta={self._theta:.6g})"


@dataclass(frozen=True)
class FluxPair:
    """
    (f, g): g on x < 0, f on x > 0, plus the interface maps h₊, h₋.

    theta_bar = f₊⁻¹(g(θ_g)) when g(θ_g) ≥ f(θ_f), else g₋⁻¹(f(θ_f)).
    iplus_lo / iminus_lo are the left ends of the slope sets on which h₊ / h₋ are defined.
    """

    f: ConvexFlux
    g: ConvexFlux

    @property
    def g_dominates(self) -> bool:
        return self.g.min_value >= self.f.min_value

    @property
    def theta_bar(self) -> float:
        if self.g_dominates:
            return float(self.f.inv_branch("plus", self.g.min_value))
        return float(self.g.inv_branch("minus", self.f.min_value))

    @property
    def iplus_lo(self) -> float:
        if self.g_dominates:
            return float(self.f.deriv(self.theta_bar))
        return 0.0

    @property
    def iminus_lo(self) -> float:
        if self.f.min_value > self.g.min_value:
            return float(self.g.deriv(self.g.inv_branch("plus", self.f.min_value)))
        return 0.0

    @property
    def dwell_cost(self) -> float:
        """min{f*(0), g*(0)}: cost per unit time spent on the interface."""
        return float(min(-self.f.min_value, -self.g.min_value))

    def stationary_state(self, x):
        """θ̄(x): θ_g for x < 0, θ_f for x ≥ 0."""
        x = np.asarray(x, dtype=float)
        return _out(np.where(x < 0, self.g.theta, self.f.theta), x)

    def h_plus(self, p):
        """h₊ = g'∘g₊⁻¹∘f∘(f')⁻¹ on p ≥ iplus_lo; nonnegative, strictly increasing."""
        pa = np.asarray(p, dtype=float)
        lo = self.iplus_lo
        if np.any(pa < lo - VALUE_TOL * max(1.0, abs(lo))):
            raise DomainError("h_plus outside its domain", p=float(np.min(pa)), lo=lo)
        a = self.f.deriv_inv(np.maximum(pa, lo))
        b = self.g.inv_branch_clamped("plus", self.f(a))
        return _out(self.g.deriv(b), p)

    def h_minus(self, p):
        """h₋ = f'∘f₋⁻¹∘g∘(g')⁻¹ on p ≥ iminus_lo; nonpositive, strictly decreasing."""
        pa = np.asarray(p, dtype=float)
        lo = self.iminus_lo
        if np.any(pa < lo - VALUE_TOL * max(1.0, abs(lo))):
            raise DomainError("h_minus outside its domain", p=float(np.min(pa)), lo=lo)
        b = self.g.deriv_inv(np.maximum(pa, lo))
        a = self.f.inv_branch_clamped("minus", self.g(b))
        return _out(self.f.deriv(a), p)

    def h_plus_inv(self, q):
        """
        The p ≥ iplus_lo with h₊(p) = q; values of q below the range of h₊ map to iplus_lo.
        """
        qa = np.asarray(q, dtype=float)
        b = self.g.deriv_inv(np.maximum(qa, self.g.deriv(self.g.theta)))
        a = self.f.inv_branch_clamped("plus", self.g(b))
        p = np.maximum(self.f.deriv(a), self.iplus_lo)
        return _out(p, q)

    def g_slope_of_f_state(self, u):
        """g'∘g₊⁻¹∘f(u), with f(u) below g's minimum clamped; returns (values, clamp_count)."""
        v = np.asarray(self.f(u), dtype=float)
        clamped = int(np.count_nonzero(v < self.g.min_value - VALUE_TOL))
        return self.g.deriv(self.g.inv_branch_clamped("plus", v)), clamped

    def f_slope_of_g_state(self, u):
        """f'∘f₋⁻¹∘g(u), clamped like g_slope_of_f_state."""
        v = np.asarray(self.g(u), dtype=float)
        clamped = int(np.count_nonzero(v < self.f.min_value - VALUE_TOL))
        return self.f.deriv(self.f.inv_branch_clamped("minus", v)), clamped

    def mirror(self) -> "FluxPair":
        """Pair seen under x -> -x, u -> -u: f~(u) = g(-u), g~(u) = f(-u)."""
        return FluxPair(f=self.g.reflected(), g=self.f.reflected())

    def check_invariants(self) -> List[str]:
        problems = [f"f: {p}" for p in self.f.check_invariants()]
        problems += [f"g: {p}" for p in self.g.check_invariants()]
        tb = self.theta_bar
        if self.g_dominates:
            if abs(self.f(tb) - self.g.min_value) > 1e-8 or self.f.deriv(tb) < -1e-10:
                problems.append("theta_bar does not satisfy f(theta_bar) = g(theta_g)")
        else:
            if abs(self.g(tb) - self.f.min_value) > 1e-8 or self.g.deriv(tb) > 1e-10:
                problems.append("theta_bar does not satisfy g(theta_bar) = f(theta_f)")
        p = np.linspace(self.iplus_lo, self.iplus_lo + 10.0, 257)
        if np.any(np.diff(self.h_plus(p)) <= 0):
            problems.append("h_plus not strictly increasing")
        p = np.linspace(self.iminus_lo, self.iminus_lo + 10.0, 257)
        if np.any(np.diff(self.h_minus(p)) >= 0):
            problems.append("h_minus not strictly decreasing")
        return problems

    def to_dict(self) -> Dict[str, Any]:
        return {"f": self.f.to_dict(), "g": self.g.to_dict()}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "FluxPair":
        if not isinstance(payload, dict) or "f" not in payload or "g" not in payload:
            raise InputError("fluxes must define both 'f' and 'g'")
        return cls(f=ConvexFlux.from_dict(payload["f"]), g=ConvexFlux.from_dict(payload["g"]))
