"""
Weighted least-squares projection onto monotone sequences, with optional constant bounds.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from solvers.errors import InputError


def isotonic_fit(
    values: Sequence[float],
    weights: Optional[Sequence[float]] = None,
    increasing: bool = True,
    lower: Optional[float] = None,
    upper: Optional[float] = None,
) -> np.ndarray:
    """
    Closest monotone sequence to `values` in the weighted L2 norm.

    Constant bounds are applied after pooling; clipping a monotone fit keeps it monotone
    and optimal for box constraints of this kind.
    """
    y = np.asarray(values, dtype=float)
    if y.ndim != 1:
        raise InputError("isotonic_fit expects a 1-d sequence", ndim=y.ndim)
    w = None
    if weights is not None:
        w = np.asarray(weights, dtype=float)
        if w.shape != y.shape:
            raise InputError("weights must match values", n_values=y.size, n_weights=w.size)
        if np.any(w <= 0):
            raise InputError("weights must be positive")
    if lower is not None and upper is not None and lower > upper:
        raise InputError("isotonic bounds are inconsistent", lower=lower, upper=upper)
    if y.size == 0:
        return y.copy()

    out = np.asarray(optimize.isotonic_regression(y, weights=w, increasing=increasing).x, dtype=float)
    if lower is not None or upper is not None:
        out = np.clip(out, lower, upper)
    return out


def weighted_sse(fit: np.ndarray, values: np.ndarray, weights: Optional[np.ndarray] = None) -> float:
    r = np.asarray(fit, dtype=float) - np.asarray(values, dtype=float)
    w = np.ones_like(r) if weights is None else np.asarray(weights, dtype=float)
    return float(np.sum(w * r * r))
