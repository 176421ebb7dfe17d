# config.py
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

# Корень проекта (по файлу config.py)
PROJECT_ROOT = Path(__file__).resolve().parent

# Проектные пути
LOGS_DIR = PROJECT_ROOT / "logs"
OUT_DIR = PROJECT_ROOT / "out"
CONFIGS_DIR = PROJECT_ROOT / "configs"

# Значения по умолчанию
DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_ENV = "production"  # "development" | "testing" | "production"
DEFAULT_THREADS = 1
DEFAULT_SEED = 20240601
DEFAULT_TIE_TOL = 1e-9
DEFAULT_INTERFACE_TOL = 1e-6
DEFAULT_CFL = 0.45


@dataclass(frozen=True)
class AppConfig:
    env: str
    log_level: str
    command: Optional[str]  # подкоманда CLI текущего запуска


@dataclass(frozen=True)
class PathsConfig:
    project_root: Path
    logs_dir: Path
    out_dir: Path
    configs_dir: Path


@dataclass(frozen=True)
class SolverConfig:
    # Число рабочих потоков для внутренних циклов решателей
    threads: int
    # Единый 64-битный seed для рандомизированных наборов
    seed: int
    # Допуск равенства стоимостей при выборе кривой управления
    tie_tol: float
    # Допуск проверки условий на интерфейсе
    interface_tol: float
    # Число Куранта для схемы Годунова
    cfl: float


@dataclass(frozen=True)
class Config:
    app: AppConfig
    paths: PathsConfig
    solver: SolverConfig


# Кеш конфигурации, чтобы не читать .env многократно
_CONFIG: Optional[Config] = None


def _read_env(name: str, default: Optional[str] = None) -> Optional[str]:
    val = os.getenv(name)
    if val is None or val == "":
        return default
    # Убираем окружающие пробелы и кавычки, которые часто оставляют в .env
    val = val.strip()
    if len(val) >= 2 and val[0] == val[-1] and val[0] in ('"', "'"):
        val = val[1:-1]
    return val if val != "" else default


def _read_int(name: str, default: int, minimum: int) -> int:
    raw = _read_env(name, str(default))
    try:
        return max(minimum, int(raw))
    except ValueError:
        logger.warning(f"Некорректное значение {name}={raw!r}, используется {default}")
        return default


def _read_float(name: str, default: float, lo: float, hi: float) -> float:
    raw = _read_env(name, repr(default))
    try:
        val = float(raw)
    except ValueError:
        logger.warning(f"Некорректное значение {name}={raw!r}, используется {default}")
        return default
    if not lo < val < hi:
        logger.warning(f"{name}={val} вне ({lo}, {hi}), используется {default}")
        return default
    return val


def get_config() -> Config:
    global _CONFIG
    if _CONFIG is not None:
        return _CONFIG

    env = _read_env("ENV", DEFAULT_ENV)
    log_level = _read_env("LOG_LEVEL", DEFAULT_LOG_LEVEL)

    out_dir_raw = _read_env("DFLUX_OUT_DIR")
    out_dir = Path(out_dir_raw).expanduser() if out_dir_raw else OUT_DIR

    solver_cfg = SolverConfig(
        threads=_read_int("DFLUX_THREADS", DEFAULT_THREADS, 1),
        seed=_read_int("DFLUX_SEED", DEFAULT_SEED, 0) % 2**64,
        tie_tol=_read_float("DFLUX_TIE_TOL", DEFAULT_TIE_TOL, 0.0, 1.0),
        interface_tol=_read_float("DFLUX_INTERFACE_TOL", DEFAULT_INTERFACE_TOL, 0.0, 1.0),
        cfl=_read_float("DFLUX_CFL", DEFAULT_CFL, 0.0, 1.0),
    )

    _CONFIG = Config(
        app=AppConfig(env=env, log_level=log_level, command=None),
        paths=PathsConfig(
            project_root=PROJECT_ROOT,
            logs_dir=LOGS_DIR,
            out_dir=out_dir,
            configs_dir=CONFIGS_DIR,
        ),
        solver=solver_cfg,
    )
    return _CONFIG


def with_overrides(
    cfg: Config,
    command: Optional[str] = None,
    out_dir: Optional[Path] = None,
    threads: Optional[int] = None,
    seed: Optional[int] = None,
) -> Config:
    """Копия конфигурации с параметрами командной строки; кеш не изменяется."""
    app = replace(cfg.app, command=command) if command else cfg.app
    paths = replace(cfg.paths, out_dir=Path(out_dir)) if out_dir else cfg.paths
    solver = cfg.solver
    if threads is not None:
        solver = replace(solver, threads=max(1, int(threads)))
    if seed is not None:
        solver = replace(solver, seed=int(seed) % 2**64)
    return Config(app=app, paths=paths, solver=solver)
