"""Общие фикстуры тестов: корень проекта в sys.path и стандартные пары потоков."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Добавляем корневую директорию проекта в path
project_root = Path(__file__).parent.parent.parent  # scripts/testing -> scripts -> project
sys.path.insert(0, str(project_root))

from solvers.flux import FluxPair, QuadraticFlux  # noqa: E402


@pytest.fixture
def quad_pair() -> FluxPair:
    """f = u²/2 справа, g = u² слева: θ_f = θ_g = 0, минимумы равны."""
    return FluxPair(f=QuadraticFlux(0.5), g=QuadraticFlux(1.0))


@pytest.fixture
def same_pair() -> FluxPair:
    """f = g = u²/2: вырожденный случай без разрыва потока."""
    return FluxPair(f=QuadraticFlux(0.5), g=QuadraticFlux(0.5))


@pytest.fixture
def g_high_pair() -> FluxPair:
    """g(θ_g) = 1 > f(θ_f) = 0: f = u²/2, g = u² + 1."""
    return FluxPair(f=QuadraticFlux(0.5), g=QuadraticFlux(1.0, 0.0, 1.0))


@pytest.fixture
def f_high_pair() -> FluxPair:
    """f(θ_f) = 1 > g(θ_g) = 0: f = u²/2 + 1, g = u²."""
    return FluxPair(f=QuadraticFlux(0.5, 0.0, 1.0), g=QuadraticFlux(1.0))


@pytest.fixture
def tmp_config(tmp_path, monkeypatch):
    """Конфигурация с каталогами результатов и логов во временной папке."""
    import config as config_module

    monkeypatch.setenv("DFLUX_OUT_DIR", str(tmp_path / "out"))
    monkeypatch.setattr(config_module, "_CONFIG", None)
    monkeypatch.setattr(config_module, "LOGS_DIR", tmp_path / "logs")
    cfg = config_module.get_config()
    yield cfg
    monkeypatch.setattr(config_module, "_CONFIG", None)


@pytest.fixture
def rng() -> np.random.Generator:
    """Генератор случайных данных, засеянный из конфигурации (DFLUX_SEED)."""
    from config import get_config

    return np.random.default_rng(get_config().solver.seed)
