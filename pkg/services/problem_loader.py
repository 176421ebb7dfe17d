"""
Problem files: JSON with the flux pair, the horizon T and one section per command.

    {
      "fluxes": {"f": {"kind": "quadratic", "a": 0.5}, "g": {"kind": "quadratic", "a": 1.0}},
      "T": 1.0,
      "seed": 7,
      "initial": {"riemann": {"left": 1.0, "right": -1.0}},
      "grid": {"x_min": -2, "x_max": 2, "nx": 401, "nt": 41},
      "oracle": {"dx": 0.001, "cfl": 0.45},
      "backward": {"R": 1.0, "rho": {...}, "y": "identity", "N": 1, "refine": {"target_l1": 0.01}},
      "target": {"C": 2.0, "k": "stationary"}, "disc": {...}, "forward": true,
      "reach": {"C1": -2, "C2": 2, "B1": -4, "B2": 4, "target": {...}, "N": 64}
    }

Every section present in the file is built and checked at load time, so a bad file fails
before any solver runs.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np

from services.io_service import read_json
from solvers import backward, control, reachable
from solvers.errors import InputError
from solvers.exterior import ExteriorMap
from solvers.flux import FluxPair
from solvers.hj_forward import GridSpec
from solvers.stepfn import StepFn

import logging

logger = logging.getLogger(__name__)

SECTIONS = ("initial", "grid", "oracle", "backward", "target", "disc", "reach")

RhoLike = Union[StepFn, Callable[[np.ndarray], np.ndarray]]


def rho_from_payload(payload: Any) -> Optional[RhoLike]:
    """StepFn-файл или линейная функция {"at0": r0, "slope": k}"""
    if payload is None:
        return None
    if isinstance(payload, dict) and "slope" in payload:
        try:
            r0, k = float(payload.get("at0", 0.0)), float(payload["slope"])
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed linear rho: {e}")
        return lambda x: r0 + k * np.asarray(x, dtype=float)
    if isinstance(payload, dict):
        return StepFn.from_dict(payload)
    raise InputError("rho must be a StepFn or {'at0', 'slope'}")


def initial_from_payload(payload: Any) -> StepFn:
    if not isinstance(payload, dict):
        raise InputError("initial data must be an object")
    if "riemann" in payload:
        rp = payload["riemann"]
        try:
            left, right = float(rp["left"]), float(rp["right"])
            at = float(rp.get("at", 0.0))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed Riemann data: {e}")
        return StepFn(np.array([at]), np.array([left, right])).merged()
    if "constant" in payload:
        try:
            return StepFn.constant(float(payload["constant"]))
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed constant data: {e}")
    return StepFn.from_dict(payload)


def backward_violations(spec: backward.BackwardSpec) -> List[str]:
    """Нарушения допустимости (R, ρ, y) в системе отсчёта плюс-случая"""
    if spec.R < 0:
        spec = spec.mirror()
    problems: List[str] = []
    rho0 = None
    if spec.R > 0:
        xs = np.linspace(0.0, spec.R, 257)
        rv = spec.rho_at(xs)
        if np.any(np.diff(rv) < -1e-12):
            problems.append("rho not nondecreasing")
        if np.any(rv > 1e-12):
            problems.append("rho > 0 on [0, R]")
        rho0 = float(rv[0])
    problems += spec.y.violations(spec.R, rho0)
    return problems


@dataclass
class ProblemConfig:
    pair: FluxPair
    T: float
    seed: Optional[int] = None
    raw: Dict[str, Any] = field(default_factory=dict, repr=False)
    path: Optional[Path] = None

    # --- разделы --------------------------------------------------------------

    def section(self, name: str) -> Dict[str, Any]:
        payload = self.raw.get(name)
        if payload is None:
            raise InputError(f"problem file has no '{name}' section", path=str(self.path))
        return payload

    def initial_data(self) -> StepFn:
        return initial_from_payload(self.section("initial"))

    def grid(self) -> GridSpec:
        return GridSpec.from_dict(self.section("grid"))

    def oracle_params(self) -> Dict[str, float]:
        """dx, cfl и область схемы Годунова; область по умолчанию берётся из grid"""
        payload = self.raw.get("oracle") or {}
        grid = self.raw.get("grid") or {}
        try:
            params = {
                "dx": float(payload.get("dx", 1e-3)),
                "cfl": float(payload["cfl"]) if "cfl" in payload else None,
                "x_min": float(payload.get("x_min", grid.get("x_min", -2.0))),
                "x_max": float(payload.get("x_max", grid.get("x_max", 2.0))),
            }
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed oracle section: {e}")
        if not params["dx"] > 0:
            raise InputError("oracle needs dx > 0", dx=params["dx"])
        if not params["x_min"] < 0.0 < params["x_max"]:
            raise InputError("oracle domain must contain the interface", x_min=params["x_min"], x_max=params["x_max"])
        return params

    def backward_spec(self) -> backward.BackwardSpec:
        payload = dict(self.section("backward"))
        try:
            R = float(payload["R"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed backward section: {e}")
        rho = rho_from_payload(payload.get("rho"))
        if R != 0 and rho is None:
            raise InputError("backward section with R != 0 needs rho")
        spec = backward.BackwardSpec(T=self.T, R=R, rho=rho, y=ExteriorMap.from_payload(payload.get("y", "identity")))
        problems = backward_violations(spec)
        if problems:
            raise InputError(f"inconsistent backward spec: {problems[0]}", problems=problems)
        return spec

    def backward_params(self) -> Dict[str, Any]:
        payload = self.section("backward")
        refine = payload.get("refine")
        try:
            params = {
                "N": int(payload.get("N", 1)),
                "nx": int(payload.get("nx", 201)),
                "target_l1": None if refine is None else float(refine["target_l1"]),
                "n_max": backward.N_MAX if refine is None else int(refine.get("n_max", backward.N_MAX)),
            }
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed backward parameters: {e}")
        if params["N"] < 1 or params["nx"] < 3:
            raise InputError("backward needs N >= 1 and nx >= 3", N=params["N"], nx=params["nx"])
        if params["target_l1"] is not None and not params["target_l1"] > 0:
            raise InputError("refine.target_l1 must be positive", target_l1=params["target_l1"])
        return params

    def target(self) -> control.TargetSpec:
        return control.TargetSpec.from_dict(self.section("target"), pair=self.pair, T=self.T)

    def disc(self) -> control.DiscSpec:
        return control.DiscSpec.from_dict(self.raw.get("disc"))

    def forward_after_optimize(self) -> bool:
        return bool(self.raw.get("forward", True))

    def reach_spec(self) -> reachable.ReachSpec:
        payload = dict(self.section("reach"))
        payload.setdefault("T", self.T)
        return reachable.ReachSpec.from_dict(payload)

    def reach_target(self) -> reachable.ReachTarget:
        """Цель W: выборка {"x", "w"}, StepFn или генератор {"witness": {side, R, rho, y}}"""
        payload = self.section("reach").get("target")
        if not isinstance(payload, dict):
            raise InputError("reach section needs a target object")
        if "witness" in payload:
            w = payload["witness"]
            try:
                side, R = str(w.get("side", "plus")), float(w["R"])
            except (KeyError, TypeError, ValueError) as e:
                raise InputError(f"malformed witness: {e}")
            if side not in ("plus", "minus"):
                raise InputError("witness side must be 'plus' or 'minus'", side=side)
            y = ExteriorMap.from_payload(w.get("y", "identity"))
            W = reachable.profile_from_witness(side, R, rho_from_payload(w.get("rho")), y, self.T, self.pair)
            return reachable.ReachTarget(W, side=side)
        if "x" in payload and "w" in payload:
            return reachable.ReachTarget.from_samples(payload["x"], payload["w"])
        return reachable.ReachTarget.from_stepfn(StepFn.from_dict(payload))

    def reach_params(self) -> Dict[str, int]:
        payload = self.section("reach")
        try:
            params = {
                "N": int(payload.get("N", 64)),
                "grid": int(payload.get("grid", 400)),
                "nx": int(payload.get("nx", 401)),
            }
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed reach parameters: {e}")
        if params["N"] < 1 or params["grid"] < 2 or params["nx"] < 3:
            raise InputError("reach needs N >= 1, grid >= 2, nx >= 3", **params)
        return params

    # --- проверка -------------------------------------------------------------

    def validate(self) -> "ProblemConfig":
        """Строит каждый присутствующий раздел; первая ошибка прерывает загрузку"""
        if "initial" in self.raw:
            self.initial_data()
        if "grid" in self.raw:
            self.grid()
        if "oracle" in self.raw:
            self.oracle_params()
        if "backward" in self.raw:
            self.backward_spec()
            self.backward_params()
        if "target" in self.raw:
            self.target()
        if "disc" in self.raw:
            self.disc()
        if "reach" in self.raw:
            self.reach_spec()
            self.reach_target()
            self.reach_params()
        return self


def parse_problem(payload: Dict[str, Any], path: Optional[Path] = None) -> ProblemConfig:
    if "fluxes" not in payload:
        raise InputError("problem file needs 'fluxes'", path=str(path))
    pair = FluxPair.from_dict(payload["fluxes"])
    problems = pair.check_invariants()
    if problems:
        raise InputError(f"flux pair fails its invariants: {problems[0]}", problems=problems)
    try:
        T = float(payload["T"])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"problem file needs a numeric T: {e}", path=str(path))
    if not T > 0 or not np.isfinite(T):
        raise InputError("T must be positive and finite", T=T)
    seed = payload.get("seed")
    if seed is not None:
        try:
            seed = int(seed) % 2**64
        except (TypeError, ValueError) as e:
            raise InputError(f"malformed seed: {e}")
    unknown = sorted(set(payload) - set(SECTIONS) - {"fluxes", "T", "seed", "forward", "name"})
    if unknown:
        logger.warning(f"Неизвестные разделы файла задачи пропущены: {unknown}")
    return ProblemConfig(pair=pair, T=T, seed=seed, raw=payload, path=path).validate()


def load_problem(path: Path) -> ProblemConfig:
    """Читает и проверяет файл задачи"""
    path = Path(path)
    problem = parse_problem(read_json(path), path)
    logger.info(f"Задача загружена: {path.name}, T={problem.T}")
    return problem
