"""The class R^tau(A, B) and sufficient conditions for the Pascal operator.

A function is in R^tau(A, B) when ``|f'(z) - 1| < |(A-B) tau - B (f'(z) - 1)|``
on the disk; its coefficients then satisfy ``|a_n| <= (A-B)|tau|/n``.
Feeding that bound through the Hadamard product with ``Psi`` yields the two
sufficient criteria below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .class_criteria import (
    ClassKind,
    ClassParams,
    CriterionKind,
    MembershipVerdict,
    Method,
    _require_kind,
    thm1_lhs,
    thm6_lhs,
)
from .errors import DomainError, EvaluationError
from .pascal_core import PascalParams
from .series import CoefficientSeries, SignConvention


@dataclass(frozen=True)
class RTauParams:
    tau: complex
    A: float
    B: float

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if self.tau == 0:
            raise DomainError("tau must be nonzero")
        if not -1.0 <= self.B < self.A <= 1.0:
            raise DomainError(f"need -1 <= B < A <= 1, got A={self.A!r}, B={self.B!r}")

    @property
    def scale(self) -> float:
        """``(A - B)|tau|``, the constant in the coefficient bound."""
        return (self.A - self.B) * abs(self.tau)


def rtau_margin(fprime, r: RTauParams):
    """``|(A-B)tau - B(f'-1)| - |f'-1|``; positive where the defining inequality holds."""
    d = np.asarray(fprime, dtype=complex) - 1.0
    den = (r.A - r.B) * r.tau - r.B * d
    if np.any(den == 0):
        raise EvaluationError("denominator (A-B)tau - B(f'-1) vanishes")
    out = np.abs(den) - np.abs(d)
    return float(out) if out.ndim == 0 else out


def lemma3_bound(n: int, r: RTauParams) -> float:
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return r.scale / n


def extremal_coefficients(r: RTauParams) -> CoefficientSeries:
    """The stream ``(A-B)|tau|/n`` attaining the coefficient bound."""
    return CoefficientSeries.harmonic(r.scale, SignConvention.T_CLASS_NEGATIVE)


def thm3_lhs(p: PascalParams, c: ClassParams, r: RTauParams) -> float:
    if p.m < 2:
        raise DomainError("the operator-in-TSP criterion requires m > 1")
    return r.scale * thm6_lhs(p, c)


def thm4_lhs(p: PascalParams, c: ClassParams, r: RTauParams) -> float:
    return r.scale * thm1_lhs(p, c)


def thm3_sufficient(p: PascalParams, c: ClassParams, r: RTauParams) -> MembershipVerdict:
    """If in class, every f in R^tau(A,B) has its operator image in TSP_p."""
    _require_kind(c, ClassKind.TSP, "thm3_sufficient")
    return MembershipVerdict.compare(
        thm3_lhs(p, c, r), c, Method.CLOSED_FORM, CriterionKind.SUFFICIENT, criterion="thm3"
    )


def thm4_sufficient(p: PascalParams, c: ClassParams, r: RTauParams) -> MembershipVerdict:
    """If in class, every f in R^tau(A,B) has its operator image in UCT_p."""
    _require_kind(c, ClassKind.UCT, "thm4_sufficient")
    return MembershipVerdict.compare(
        thm4_lhs(p, c, r), c, Method.CLOSED_FORM, CriterionKind.SUFFICIENT, criterion="thm4"
    )


def sampled_rtau_margin(fprime_values, r: RTauParams) -> float:
    """Minimum of :func:`rtau_margin` over sampled derivative values (evidence only)."""
    return float(np.min(rtau_margin(np.atleast_1d(fprime_values), r)))
