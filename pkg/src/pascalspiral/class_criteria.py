"""Membership tests for the uniformly spirallike classes TSP_p and UCT_p.

For ``f(z) = z - sum |a_n| z^n`` membership reduces to a weighted
coefficient sum compared against ``cos(alpha) - beta``:

    TSP:  sum (2n - cos(alpha) - beta) |a_n|    <= cos(alpha) - beta
    UCT:  sum n (2n - cos(alpha) - beta) |a_n|  <= cos(alpha) - beta

For the Pascal series the sums have closed forms (``thm*_closed``).  The
geometric side (``spiral_margin``) evaluates the defining inequality at
points of the disk.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EvaluationError, PreconditionError, UnboundedSumError
from .pascal_core import PascalParams, integral_series, moment_sums, pascal_series, reciprocal_moment
from .series import CoefficientSeries, certified_sum, evaluate_many

DEFAULT_SUM_TOL = 1e-13


class ClassKind(str, enum.Enum):
    TSP = "TSP"
    UCT = "UCT"


class Method(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC_SUM = "numeric_sum"
    GEOMETRIC_SAMPLE = "geometric_sample"


class CriterionKind(str, enum.Enum):
    IFF = "iff"
    SUFFICIENT = "sufficient"
    EVIDENCE = "evidence"


class Criterion(str, enum.Enum):
    """Closed-form criteria, keyed by the function and class they decide."""

    THM1 = "thm1"  # Phi in TSP, iff
    THM2 = "thm2"  # Phi in UCT, iff
    THM3 = "thm3"  # operator image in TSP, sufficient, m > 1
    THM4 = "thm4"  # operator image in UCT, sufficient
    THM5 = "thm5"  # G in UCT, iff
    THM6 = "thm6"  # G in TSP, iff, m > 1

    @property
    def kind(self) -> ClassKind:
        return ClassKind.TSP if self in (Criterion.THM1, Criterion.THM3, Criterion.THM6) else ClassKind.UCT

    @property
    def target(self) -> str:
        return {"thm1": "phi", "thm2": "phi", "thm3": "operator", "thm4": "operator"}.get(self.value, "g")

    @property
    def criterion_kind(self) -> CriterionKind:
        if self in (Criterion.THM3, Criterion.THM4):
            return CriterionKind.SUFFICIENT
        return CriterionKind.IFF

    @property
    def min_m(self) -> int:
        return 2 if self in (Criterion.THM3, Criterion.THM6) else 1

    @classmethod
    def for_target(cls, target: str, kind: ClassKind) -> "Criterion":
        for crit in cls:
            if crit.target == target and crit.kind is kind:
                return crit
        raise KeyError((target, kind))


@dataclass(frozen=True)
class ClassParams:
    alpha: float
    beta: float
    kind: ClassKind = ClassKind.TSP

    def __post_init__(self):
        if not abs(self.alpha) < math.pi / 2:
            raise DomainError(f"|alpha| must be < pi/2, got {self.alpha!r}")
        if not 0.0 <= self.beta < 1.0:
            raise DomainError(f"beta must lie in [0, 1), got {self.beta!r}")
        object.__setattr__(self, "kind", ClassKind(self.kind))

    @property
    def cos_alpha(self) -> float:
        return math.cos(self.alpha)

    @property
    def rhs(self) -> float:
        return self.cos_alpha - self.beta

    @property
    def shift(self) -> float:
        """``cos(alpha) + beta``, the constant subtracted from 2n in the weights."""
        return self.cos_alpha + self.beta

    def with_kind(self, kind: ClassKind) -> "ClassParams":
        return ClassParams(self.alpha, self.beta, kind)


@dataclass(frozen=True)
class MembershipVerdict:
    lhs: float
    rhs: float
    margin: float
    in_class: bool
    method: Method
    criterion_kind: CriterionKind = CriterionKind.IFF
    criterion: str | None = None
    error_bound: float = 0.0

    @classmethod
    def compare(cls, lhs, c: ClassParams, method, criterion_kind=CriterionKind.IFF, criterion=None, error_bound=0.0):
        rhs = c.rhs
        margin = rhs - lhs
        return cls(lhs, rhs, margin, margin >= 0.0, Method(method), CriterionKind(criterion_kind), criterion, error_bound)

    @property
    def verdict(self) -> str:
        if self.in_class:
            return "in_class"
        if self.criterion_kind is CriterionKind.IFF:
            return "not_in_class"
        return "inconclusive"


def _require_kind(c: ClassParams, kind: ClassKind, what: str):
    if c.kind is not kind:
        raise PreconditionError(f"{what} decides {kind.value} membership, got class {c.kind.value}")


def lemma_weight(c: ClassParams) -> list[float]:
    """Polynomial coefficients (low to high) of the weight for class ``c.kind``."""
    if c.kind is ClassKind.TSP:
        return [-c.shift, 2.0]
    return [0.0, -c.shift, 2.0]


def _lemma_sum(f: CoefficientSeries, c: ClassParams, tol: float, criterion: str) -> MembershipVerdict:
    try:
        value, err = certified_sum(f, lemma_weight(c), tol)
    except UnboundedSumError as exc:
        exc.verdict = MembershipVerdict.compare(math.inf, c, Method.NUMERIC_SUM, criterion=criterion)
        raise
    return MembershipVerdict.compare(value, c, Method.NUMERIC_SUM, criterion=criterion, error_bound=err)


def lemma1_sum(f: CoefficientSeries, c: ClassParams, tol: float = DEFAULT_SUM_TOL) -> MembershipVerdict:
    """Certified ``sum (2n - cos a - b)|a_n|`` against ``cos a - b`` (TSP, iff on T)."""
    _require_kind(c, ClassKind.TSP, "lemma1_sum")
    return _lemma_sum(f, c, tol, "lemma1")


def lemma2_sum(f: CoefficientSeries, c: ClassParams, tol: float = DEFAULT_SUM_TOL) -> MembershipVerdict:
    """Certified ``sum n(2n - cos a - b)|a_n|`` against ``cos a - b`` (UCT, iff on T)."""
    _require_kind(c, ClassKind.UCT, "lemma2_sum")
    return _lemma_sum(f, c, tol, "lemma2")


# -- closed forms ---------------------------------------------------------


def thm1_lhs(p: PascalParams, c: ClassParams) -> float:
    ms = moment_sums(p, with_recip=False)
    return 2.0 * p.q * p.m / (1.0 - p.q) + (2.0 - c.shift) * ms.s0


def thm2_lhs(p: PascalParams, c: ClassParams) -> float:
    m, q = p.m, p.q
    ms = moment_sums(p, with_recip=False)
    return 2.0 * q * q * m * (m + 1) / (1.0 - q) ** 2 + (6.0 - c.shift) * q * m / (1.0 - q) + (2.0 - c.shift) * ms.s0


def thm6_lhs(p: PascalParams, c: ClassParams) -> float:
    if p.m < 2:
        raise DomainError("the G-in-TSP criterion requires m > 1")
    if p.q == 0.0:
        return 0.0
    return 2.0 * p.mass_beyond_zero - c.shift * reciprocal_moment(p)


def thm1_closed(p: PascalParams, c: ClassParams) -> MembershipVerdict:
    """Iff-criterion for ``Phi`` in TSP_p(alpha, beta)."""
    _require_kind(c, ClassKind.TSP, "thm1_closed")
    return MembershipVerdict.compare(thm1_lhs(p, c), c, Method.CLOSED_FORM, criterion="thm1")


def thm2_closed(p: PascalParams, c: ClassParams) -> MembershipVerdict:
    """Iff-criterion for ``Phi`` in UCT_p(alpha, beta)."""
    _require_kind(c, ClassKind.UCT, "thm2_closed")
    return MembershipVerdict.compare(thm2_lhs(p, c), c, Method.CLOSED_FORM, criterion="thm2")


def thm5_closed(p: PascalParams, c: ClassParams) -> MembershipVerdict:
    """Iff-criterion for ``G`` in UCT_p; same inequality as for ``Phi`` in TSP_p."""
    _require_kind(c, ClassKind.UCT, "thm5_closed")
    return MembershipVerdict.compare(thm1_lhs(p, c), c, Method.CLOSED_FORM, criterion="thm5")


def thm6_closed(p: PascalParams, c: ClassParams) -> MembershipVerdict:
    """Iff-criterion for ``G`` in TSP_p, m > 1."""
    _require_kind(c, ClassKind.TSP, "thm6_closed")
    return MembershipVerdict.compare(thm6_lhs(p, c), c, Method.CLOSED_FORM, criterion="thm6")


def closed_form(criterion, p: PascalParams, c: ClassParams, rtau=None) -> MembershipVerdict:
    """Dispatch to the closed-form criterion named by ``criterion``."""
    criterion = Criterion(criterion)
    if criterion in (Criterion.THM3, Criterion.THM4):
        from . import inclusion

        if rtau is None:
            raise PreconditionError(f"{criterion.value} needs R^tau(A,B) parameters")
        fn = inclusion.thm3_sufficient if criterion is Criterion.THM3 else inclusion.thm4_sufficient
        return fn(p, c, rtau)
    fn = {
        Criterion.THM1: thm1_closed,
        Criterion.THM2: thm2_closed,
        Criterion.THM5: thm5_closed,
        Criterion.THM6: thm6_closed,
    }[criterion]
    return fn(p, c)


def corollary_beta0(p: PascalParams, alpha: float, which, rtau=None) -> MembershipVerdict:
    """The beta = 0 specialization of a theorem, through the general code path."""
    which = Criterion(which)
    return closed_form(which, p, ClassParams(alpha, 0.0, which.kind), rtau)


def target_series(criterion, p: PascalParams) -> CoefficientSeries:
    """Coefficient stream of the function a criterion is about (``Phi`` or ``G``)."""
    criterion = Criterion(criterion)
    if criterion.target == "phi":
        return pascal_series(p)
    if criterion.target == "g":
        return integral_series(p)
    raise PreconditionError("operator criteria concern a class of functions, not one series")


def numeric_oracle(criterion, p: PascalParams, c: ClassParams, tol: float = DEFAULT_SUM_TOL, rtau=None) -> MembershipVerdict:
    """The coefficient-sum counterpart of :func:`closed_form`.

    Operator criteria sum over the extremal stream ``(A-B)|tau|/n``, which
    is the worst case the sufficient condition bounds.
    """
    criterion = Criterion(criterion)
    if criterion in (Criterion.THM3, Criterion.THM4):
        from .inclusion import extremal_coefficients
        from .pascal_core import apply_operator

        series = apply_operator(extremal_coefficients(rtau), p)
    else:
        series = target_series(criterion, p)
    c = c.with_kind(criterion.kind)
    verdict = lemma1_sum(series, c, tol) if criterion.kind is ClassKind.TSP else lemma2_sum(series, c, tol)
    return MembershipVerdict(
        verdict.lhs, verdict.rhs, verdict.margin, verdict.in_class, verdict.method,
        criterion.criterion_kind, criterion.value, verdict.error_bound,
    )


# -- geometric side --------------------------------------------------------

SAFE_DENOMINATOR = 1e-13


def spiral_margin(fvals, z, c: ClassParams):
    """``Re(e^{-i alpha} w) - |w - 1| - beta`` at ``z``.

    TSP uses ``w = z f'(z)/f(z)`` and ``fvals = (f, f')``.  UCT applies the
    same test to ``z f'(z)``, i.e. ``w = 1 + z f''(z)/f'(z)`` with
    ``fvals = (f, f', f'')``.  At ``z = 0`` the limit ``w = 1`` is used.
    Accepts scalars or equally shaped arrays.
    """
    z = np.asarray(z, dtype=complex)
    vals = [np.asarray(v, dtype=complex) for v in fvals]
    at_origin = z == 0
    if c.kind is ClassKind.TSP:
        num, den, scale = z * vals[1], vals[0], np.abs(z)
    else:
        if len(vals) < 3:
            raise ValueError("UCT margins need (f, f', f'')")
        num, den, scale = z * vals[2], vals[1], np.ones_like(np.abs(z))
    bad = (~at_origin) & (np.abs(den) <= SAFE_DENOMINATOR * scale)
    if np.any(bad):
        raise EvaluationError(f"vanishing denominator at z = {z[bad].ravel()[0]}")
    safe_den = np.where(at_origin, 1.0, den)
    if c.kind is ClassKind.TSP:
        w = np.where(at_origin, 1.0, num / safe_den)
    else:
        w = np.where(at_origin, 1.0, 1.0 + num / safe_den)
    out = (np.exp(-1j * c.alpha) * w).real - np.abs(w - 1.0) - c.beta
    return float(out) if out.ndim == 0 else out


def disk_points(n: int, r_max: float = 0.999, seed: int = 0) -> np.ndarray:
    """Deterministic scrambled-Halton points, area-uniform in ``|z| <= r_max``."""
    from scipy.stats import qmc

    if n <= 0:
        return np.zeros(0, dtype=complex)
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    r = r_max * np.sqrt(u[:, 0])
    return r * np.exp(2j * np.pi * u[:, 1])


def sampled_margins(series: CoefficientSeries, c: ClassParams, zs, tol: float = 1e-14) -> np.ndarray:
    derivs = (0, 1) if c.kind is ClassKind.TSP else (0, 1, 2)
    vals = evaluate_many(series, zs, tol, derivs)
    return np.atleast_1d(spiral_margin(vals, zs, c))


def geometric_sample(
    series: CoefficientSeries, c: ClassParams, n_points: int = 1000, r_max: float = 0.999, seed: int = 0
) -> MembershipVerdict:
    """Sampled evidence of membership: the minimum margin over ``disk_points``.

    Reported ``lhs`` is ``rhs - min margin``; this is evidence, never a
    certificate.
    """
    zs = np.concatenate([[0j], disk_points(n_points, r_max, seed)])
    worst = float(np.min(sampled_margins(series, c, zs)))
    return MembershipVerdict.compare(c.rhs - worst, c, Method.GEOMETRIC_SAMPLE, CriterionKind.EVIDENCE)
