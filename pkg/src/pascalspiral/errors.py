"""Exception types raised by pascalspiral."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the range where a formula is defined."""


class CertificationError(ArithmeticError):
    """A truncated sum could not be given a rigorous tail bound."""


class UnboundedSumError(CertificationError):
    """The coefficient functional diverges, so the series is not in the class.

    ``verdict`` carries the resulting not-in-class verdict when the error is
    raised from a membership functional.
    """

    def __init__(self, message: str, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class EvaluationError(ArithmeticError):
    """A pointwise quantity has a vanishing denominator."""


class PreconditionError(ValueError):
    """An operation was called on inputs its contract excludes."""


class MonotonicityError(RuntimeError):
    """A criterion failed the monotone-in-q pre-scan used by bisection."""
