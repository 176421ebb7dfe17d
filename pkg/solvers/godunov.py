"""
First-order Godunov finite-volume solver, used as an independent reference.

The x=0 line is always a cell face. Left of it the numerical flux is built from g, right of
it from f, and at the face itself from the coupled flux max{g(max(a,θ_g)), f(min(b,θ_f))}.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from solvers.errors import InputError, StabilityError
from solvers.flux import ConvexFlux, FluxPair
from solvers.stepfn import StepFn

logger = logging.getLogger(__name__)

DEFAULT_DT_FLOOR = 1e-9


def godunov_flux(h: ConvexFlux, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    th = h.theta
    return np.maximum(h(np.maximum(a, th)), h(np.minimum(b, th)))


def interface_flux(pair: FluxPair, a, b):
    """Face flux at x=0: a is the state on the g side, b on the f side."""
    return np.maximum(pair.g(np.maximum(a, pair.g.theta)), pair.f(np.minimum(b, pair.f.theta)))


@dataclass
class FvState:
    cells: np.ndarray
    dx: float
    interface_index: int
    cfl: float
    time: float = 0.0
    steps: int = 0

    def __post_init__(self):
        if self.cells.size < 4:
            raise InputError("finite-volume grid needs at least 4 cells", cells=self.cells.size)
        if not 0.0 < self.cfl < 1.0:
            raise InputError("cfl must lie in (0, 1)", cfl=self.cfl)


@dataclass(frozen=True)
class Profile:
    x: np.ndarray
    u: np.ndarray
    dx: float
    T: float
    steps: int
    snapshots: Dict[float, np.ndarray] = field(default_factory=dict, repr=False)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x, "u": self.u})

    def u_at(self, x) -> np.ndarray:
        return np.interp(x, self.x, self.u)


def _edges(x_min: float, x_max: float, dx: float) -> Tuple[np.ndarray, int]:
    n_left = int(math.ceil(-x_min / dx - 1e-9))
    n_right = int(math.ceil(x_max / dx - 1e-9))
    return dx * np.arange(-n_left, n_right + 1, dtype=float), n_left


def _step(state: FvState, pair: FluxPair, dt: float) -> None:
    u = state.cells
    k = state.interface_index
    flux = np.empty(u.size + 1)
    flux[0] = pair.g(u[0]) if k > 0 else pair.f(u[0])
    flux[-1] = pair.f(u[-1]) if k < u.size else pair.g(u[-1])
    if k > 1:
        flux[1:k] = godunov_flux(pair.g, u[: k - 1], u[1:k])
    if 0 < k < u.size:
        flux[k] = interface_flux(pair, u[k - 1], u[k])
    if k + 1 < u.size:
        flux[k + 1 : u.size] = godunov_flux(pair.f, u[k : u.size - 1], u[k + 1 :])
    state.cells = u - dt / state.dx * np.diff(flux)


def _max_speed(state: FvState, pair: FluxPair) -> float:
    k = state.interface_index
    u = state.cells
    speeds = [0.0]
    if k > 0:
        speeds.append(float(np.max(np.abs(pair.g.deriv(u[:k])))))
    if k < u.size:
        speeds.append(float(np.max(np.abs(pair.f.deriv(u[k:])))))
    return max(speeds)


def run(
    u0: StepFn,
    pair: FluxPair,
    T: float,
    dx: float,
    cfl: float = 0.45,
    x_min: float = -2.0,
    x_max: float = 2.0,
    dt_floor: float = DEFAULT_DT_FLOOR,
    snapshot_times: Sequence[float] = (),
) -> Profile:
    """
    Explicit Godunov update of the cell averages of u0 up to time T.

    dt is recomputed every step from the current maximal characteristic speed.
    """
    if not T > 0 or not dx > 0:
        raise InputError("oracle needs T > 0 and dx > 0", T=T, dx=dx)
    if not x_min < 0.0 < x_max:
        raise InputError("oracle domain must contain the interface", x_min=x_min, x_max=x_max)
    edges, k = _edges(x_min, x_max, dx)
    prim = u0.primitive()
    cells = np.diff(prim(edges)) / dx
    state = FvState(cells=cells, dx=dx, interface_index=k, cfl=cfl)
    pending: List[float] = sorted(float(t) for t in snapshot_times if 0.0 < t <= T)
    snapshots: Dict[float, np.ndarray] = {}

    while state.time < T:
        smax = _max_speed(state, pair)
        dt = cfl * dx / smax if smax > 0 else T - state.time
        stop = pending[0] if pending else T
        dt = min(dt, stop - state.time)
        if dt < dt_floor * T and state.time + dt < stop:
            raise StabilityError("time step fell below the floor", dt=dt, time=state.time)
        _step(state, pair, dt)
        state.time = stop if state.time + dt >= stop else state.time + dt
        state.steps += 1
        if not np.all(np.isfinite(state.cells)):
            raise StabilityError("non-finite cell values", time=state.time, steps=state.steps)
        if pending and state.time >= pending[0]:
            snapshots[pending.pop(0)] = state.cells.copy()

    centers = 0.5 * (edges[:-1] + edges[1:])
    logger.info(f"Годунов: {state.cells.size} ячеек, {state.steps} шагов, dx={dx:g}, T={T:g}")
    return Profile(x=centers, u=state.cells, dx=dx, T=float(T), steps=state.steps, snapshots=snapshots)
