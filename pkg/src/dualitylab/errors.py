"""Exception hierarchy shared by every dualitylab module."""

from __future__ import annotations


class DualityLabError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(DualityLabError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NonConvergence(DualityLabError, RuntimeError):
    """A numerical budget was exhausted before the tolerance was met.

    The partial result is attached as ``result`` so callers can report it.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class EvaluationError(DualityLabError, ArithmeticError):
    """An integrand or target function returned NaN or an infinity."""


class BadBracket(DualityLabError, ValueError):
    """The root bracket does not straddle a sign change."""


class TooFewPoints(DualityLabError, ValueError):
    pass


class InsufficientEnvelope(DualityLabError, RuntimeError):
    """Too few envelope points in the fitting window of a spectral profile."""


class TruncationCapError(DualityLabError, RuntimeError):
    """A series would need more terms than the configured cap allows."""
