from pathlib import Path
from typing import Optional

from solvers.errors import InputError

# Настройка логирования
import logging

logger = logging.getLogger(__name__)


def resolve_problem_path(path: Optional[Path], cfg) -> Path:
    """Путь к файлу задачи: как указан, иначе относительно каталога configs.

    Args:
        path: значение --config
        cfg: конфигурация запуска

    Returns:
        Path: существующий файл задачи
    """
    if path is None:
        raise InputError("--config is required for this command")
    path = Path(path).expanduser()
    if path.exists():
        return path
    fallback = cfg.paths.configs_dir / path
    if fallback.exists():
        logger.debug(f"Файл задачи найден в {cfg.paths.configs_dir}: {path}")
        return fallback
    raise InputError("problem file not found", path=str(path))


def output_dir(cfg, command: str) -> Path:
    """Каталог результатов команды: <out>/<command>, создаётся при необходимости"""
    out = Path(cfg.paths.out_dir) / command.replace(" ", "_")
    out.mkdir(parents=True, exist_ok=True)
    return out


def effective_seed(cli_seed: Optional[int], problem_seed: Optional[int], cfg) -> int:
    """--seed важнее seed из файла задачи, тот важнее DFLUX_SEED"""
    if cli_seed is not None:
        return int(cli_seed) % 2**64
    if problem_seed is not None:
        return int(problem_seed) % 2**64
    return int(cfg.solver.seed)
