"""Membership thresholds in q and parameter sweeps over the closed forms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .class_criteria import (
    ClassParams,
    Criterion,
    MembershipVerdict,
    closed_form,
    numeric_oracle,
)
from .errors import DomainError, MonotonicityError, PreconditionError
from .inclusion import RTauParams
from .pascal_core import PascalParams

PRESCAN_POINTS = 32
Q_MAX = 1.0 - 1e-12


class ThresholdStatus(str, enum.Enum):
    OK = "ok"
    SATURATED = "saturated"  # in class all the way up to Q_MAX
    DEGENERATE = "degenerate"  # cos(alpha) == beta: only q = 0 qualifies
    NOT_ATTAINABLE = "not_attainable"  # cos(alpha) < beta: no q qualifies


@dataclass(frozen=True)
class ThresholdCertificate:
    below: MembershipVerdict
    above: MembershipVerdict | None

    @property
    def certified(self) -> bool:
        return self.below.in_class and (self.above is None or not self.above.in_class)


@dataclass(frozen=True)
class ThresholdResult:
    q_star: float
    bracket_width: float
    criterion: Criterion
    m: int
    alpha: float
    beta: float
    rtau: RTauParams | None
    evaluations: int
    status: ThresholdStatus = ThresholdStatus.OK
    certificate: ThresholdCertificate | None = None


def _lhs(criterion, m, q, c, rtau) -> float:
    return closed_form(criterion, PascalParams(m, q), c, rtau).lhs


def q_star(
    m: int,
    c: ClassParams,
    criterion,
    tol: float = 1e-12,
    rtau: RTauParams | None = None,
    verify: bool = False,
    verify_tol: float = 1e-15,
) -> ThresholdResult:
    """Largest q (to within ``tol``) for which the criterion still holds.

    Membership holds at the returned ``q_star`` and fails at
    ``q_star + bracket_width``.  The LHS is scanned on a 32-point grid first
    and must be nondecreasing there; bisection then refines the first
    in/out bracket of the scan.
    """
    criterion = Criterion(criterion)
    c = c.with_kind(criterion.kind)
    if m < criterion.min_m:
        raise DomainError(f"{criterion.value} requires m >= {criterion.min_m}, got m={m}")
    if criterion.criterion_kind.value == "sufficient" and rtau is None:
        raise PreconditionError(f"{criterion.value} needs R^tau(A,B) parameters")
    if tol <= 0:
        raise ValueError("tol must be positive")

    def result(q, width, evals, status, cert=None):
        return ThresholdResult(q, width, criterion, m, c.alpha, c.beta, rtau, evals, status, cert)

    rhs = c.rhs
    if rhs < 0:
        return result(0.0, 0.0, 0, ThresholdStatus.NOT_ATTAINABLE)
    if rhs == 0:
        return result(0.0, 0.0, 0, ThresholdStatus.DEGENERATE)

    grid = np.linspace(0.0, Q_MAX, PRESCAN_POINTS)
    values = [_lhs(criterion, m, float(q), c, rtau) for q in grid]
    evals = len(values)
    for i in range(len(values) - 1):
        if values[i + 1] < values[i] - 1e-12 * max(1.0, abs(values[i])):
            raise MonotonicityError(
                f"{criterion.value} LHS decreases between q={grid[i]:.6g} and q={grid[i + 1]:.6g}"
            )
    inside = [v <= rhs for v in values]
    if all(inside):
        return result(Q_MAX, 0.0, evals, ThresholdStatus.SATURATED)
    first_out = inside.index(False)
    if not all(inside[:first_out]) or any(inside[first_out:]):
        raise MonotonicityError(f"{criterion.value} verdicts are not an in-class prefix on the scan")
    lo, hi = float(grid[first_out - 1]), float(grid[first_out])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        evals += 1
        if _lhs(criterion, m, mid, c, rtau) <= rhs:
            lo = mid
        else:
            hi = mid
    cert = None
    if verify:
        below = numeric_oracle(criterion, PascalParams(m, lo), c, verify_tol, rtau)
        above = numeric_oracle(criterion, PascalParams(m, hi), c, verify_tol, rtau) if hi < 1.0 else None
        cert = ThresholdCertificate(below, above)
    return result(lo, hi - lo, evals, ThresholdStatus.OK, cert)


ROW_FIELDS = (
    "m", "q", "alpha", "beta", "class_kind", "criterion", "criterion_kind",
    "lhs", "rhs", "margin", "verdict", "method",
)


@dataclass(frozen=True)
class OutputRow:
    m: int
    q: float
    alpha: float
    beta: float
    class_kind: str
    criterion: str
    criterion_kind: str
    lhs: float
    rhs: float
    margin: float
    verdict: str
    method: str
    message: str = field(default="", compare=False)

    @classmethod
    def from_verdict(cls, m, q, c: ClassParams, criterion: Criterion, v: MembershipVerdict) -> "OutputRow":
        return cls(
            m, q, c.alpha, c.beta, criterion.kind.value, criterion.value, v.criterion_kind.value,
            v.lhs, v.rhs, v.margin, v.verdict, v.method.value,
        )

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in ROW_FIELDS}


def evaluate_row(m, q, c: ClassParams, criterion, rtau=None) -> OutputRow:
    criterion = Criterion(criterion)
    c = c.with_kind(criterion.kind)
    try:
        v = closed_form(criterion, PascalParams(m, q), c, rtau)
    except (DomainError, PreconditionError) as exc:
        return OutputRow(
            m, q, c.alpha, c.beta, criterion.kind.value, criterion.value, criterion.criterion_kind.value,
            math.nan, c.rhs, math.nan, "error", "closed_form", str(exc),
        )
    return OutputRow.from_verdict(m, q, c, criterion, v)


def sweep(m_list, q_grid, c_list, criteria, rtau: RTauParams | None = None) -> list[OutputRow]:
    """One row per (m, q, class, criterion), in that lexicographic order.

    Each criterion fixes its class kind, so only ``alpha`` and ``beta`` are
    taken from the entries of ``c_list``.  Domain errors are recorded in the
    row (verdict ``"error"``) rather than raised.
    """
    criteria = [Criterion(k) for k in criteria]
    return [
        evaluate_row(m, q, c, crit, rtau)
        for m in m_list
        for q in q_grid
        for c in c_list
        for crit in criteria
    ]
