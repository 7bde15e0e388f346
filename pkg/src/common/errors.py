"""Exception hierarchy for the kinetic solvers."""

from __future__ import annotations

from collections.abc import Sequence


class KnudsenError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KnudsenError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonFiniteValueError(DomainError):
    """A NaN or infinity showed up; ``location`` says where."""

    def __init__(self, message: str, location: dict[str, float] | None = None) -> None:
        super().__init__(message)
        self.location = dict(location or {})


class QuadratureConstructionError(KnudsenError, RuntimeError):
    def __init__(self, degree: int, detail: str) -> None:
        super().__init__(f"Quadrature construction failed at degree {degree}: {detail}")
        self.degree = degree


class ConvergenceError(KnudsenError, RuntimeError):
    """Source iteration hit ``max_iter`` before meeting the tolerance."""

    def __init__(self, iterations: int, history: Sequence[float], tol: float) -> None:
        last = history[-1] if history else float("nan")
        super().__init__(
            f"Source iteration did not converge after {iterations} iterations "
            f"(last relative change {last:.3e}, tolerance {tol:.1e})"
        )
        self.iterations = iterations
        self.history = list(history)
        self.tol = tol


class FitError(KnudsenError, ValueError):
    """Asymptote extraction could not be performed on the given field."""


__all__ = [
    "ConvergenceError",
    "DomainError",
    "FitError",
    "KnudsenError",
    "NonFiniteValueError",
    "QuadratureConstructionError",
]
