"""
Bracketed bisection for monotone scalar equations.

Scalar problems go through scipy.optimize.bisect after the bracket has been grown;
array problems (one independent equation per element) use a vectorised bisection loop.
"""
from __future__ import annotations

import logging
from typing import Callable, Tuple

import numpy as np
from scipy import optimize

from solvers.errors import SolveError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
_MAX_GROW = 80
_MAX_ITER = 200


def grow_bracket(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    direction: str = "up",
    max_grow: int = _MAX_GROW,
) -> Tuple[float, float]:
    """
    Expands [lo, hi] until fn changes sign over it.

    Args:
        fn: continuous scalar function
        lo, hi: initial bracket, lo < hi
        direction: "up" moves hi to the right, "down" moves lo to the left

    Returns:
        (lo, hi) with fn(lo) * fn(hi) <= 0
    """
    f_lo, f_hi = fn(lo), fn(hi)
    step = max(hi - lo, 1.0)
    for _ in range(max_grow):
        if np.sign(f_lo) * np.sign(f_hi) <= 0:
            return lo, hi
        if direction == "up":
            lo, f_lo = hi, f_hi
            hi = hi + step
            f_hi = fn(hi)
        else:
            hi, f_hi = lo, f_lo
            lo = lo - step
            f_lo = fn(lo)
        step *= 2.0
    raise SolveError("no sign change found while growing bracket", lo=lo, hi=hi)


def bisect_scalar(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_TOL,
    direction: str = "up",
) -> float:
    """Root of a monotone scalar function, growing the bracket when needed."""
    lo, hi = grow_bracket(fn, lo, hi, direction=direction)
    f_lo = fn(lo)
    if f_lo == 0.0:
        return lo
    f_hi = fn(hi)
    if f_hi == 0.0:
        return hi
    return float(optimize.bisect(fn, lo, hi, xtol=tol, maxiter=_MAX_ITER))


def bisect_array(
    fn: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iter: int = _MAX_ITER,
) -> np.ndarray:
    """
    Elementwise bisection: fn maps an array of abscissae to an array of residuals.

    Each element must satisfy fn(lo) * fn(hi) <= 0; the orientation (increasing or
    decreasing residual) is read from the sign at lo, per element.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo, hi = lo.copy(), hi.copy()
    sign_lo = np.sign(fn(lo))
    for _ in range(max_iter):
        if np.all(hi - lo <= tol):
            break
        mid = 0.5 * (lo + hi)
        s_mid = np.sign(fn(mid))
        same = s_mid == sign_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)
