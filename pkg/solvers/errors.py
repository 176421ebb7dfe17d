"""
Исключения численного ядра.

Каждое исключение несёт код выхода CLI: 2 при ошибке валидации входных данных,
3 при отказе решателя.
"""


class DfluxError(Exception):
    """Базовое исключение пакета."""

    exit_code: int = 3

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context

    def __str__(self) -> str:
        base = super().__str__()
        if not self.context:
            return base
        details = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{base} ({details})"


class InputError(DfluxError, ValueError):
    """Malformed or inconsistent input data."""

    exit_code = 2


class DomainError(DfluxError, ValueError):
    """Argument outside the domain of a flux map (branch inverse, h+, h-, t-map)."""

    exit_code = 2


class SolveError(DfluxError, RuntimeError):
    """A solver could not produce an answer (no bracket, inconsistent geometry)."""

    exit_code = 3


class StabilityError(SolveError):
    """Explicit time stepping cannot keep the CFL condition."""


class ConvergenceError(SolveError):
    """An iterative refinement did not reach its tolerance."""
