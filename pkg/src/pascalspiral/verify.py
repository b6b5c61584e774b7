"""Cross-checks between closed forms and numeric oracles.

The suites here back the ``verify`` CLI command.  Brute-force sums use exact
integer binomials and plain accumulation, independent of the closed forms
they are compared with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .class_criteria import (
    ClassKind,
    ClassParams,
    Criterion,
    closed_form,
    numeric_oracle,
    spiral_margin,
    target_series,
    thm1_lhs,
)
from .errors import PreconditionError
from .inclusion import RTauParams, thm4_lhs
from .pascal_core import IDENTITIES, PascalParams, closed_geometric_sums, identity_terms, moment_sums
from .series import TailBound, certified_sum, polynomial_evaluator  # noqa: F401  (re-exported)

Q_GRID = tuple(round(0.05 * k, 2) for k in range(1, 19))
M_IDENTITY = tuple(range(1, 11))
M_CRITERIA = (1, 2, 3, 5, 10)
ALPHAS = (0.0, math.pi / 6, -math.pi / 6, math.pi / 3, -math.pi / 3)
BETAS = (0.0, 0.25, 0.5)
RTAU_AB = ((1.0, -1.0), (0.5, 0.0), (1.0, 0.0))
TAU_MODULI = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class EquivalenceReport:
    passed: bool
    closed: float
    value: float
    error_bound: float
    difference: float
    allowed: float


def equivalence_report(closed: float, numeric, rel_tol: float) -> EquivalenceReport:
    """Pass iff ``|closed - value| <= rel_tol * max(1, |closed|) + error_bound``."""
    value, error_bound = numeric
    diff = abs(closed - value)
    allowed = rel_tol * max(1.0, abs(closed)) + error_bound
    return EquivalenceReport(diff <= allowed, closed, value, error_bound, diff, allowed)


# -- necessity witnesses ----------------------------------------------------

WITNESS_STEPS = 40
_REFINE_STEPS = 60
# Refinement keeps the witness this far below zero so it survives re-evaluation.
WITNESS_MARGIN = 1e-9


def necessity_witness(p: PascalParams, c: ClassParams, criterion, k_max: int = WITNESS_STEPS) -> float | None:
    """A radius ``r`` in (0, 1) with negative spiral margin on the positive axis.

    Scans ``r = 1 - 2^-k`` for k = 1..k_max, then bisects back to where the
    margin changes sign.  Returns ``None`` when no such point turns up.
    """
    criterion = Criterion(criterion)
    if criterion.criterion_kind.value != "iff":
        raise PreconditionError("witnesses exist only for iff criteria")
    c = c.with_kind(criterion.kind)
    verdict = closed_form(criterion, p, c)
    if verdict.margin >= -1e-6:
        raise PreconditionError(f"{criterion.value} verdict is not clearly out of class (margin {verdict.margin:.3g})")
    series = target_series(criterion, p)
    derivs = (0, 1) if c.kind is ClassKind.TSP else (0, 1, 2)
    at = polynomial_evaluator(series, 1.0 - 2.0**-k_max, 1e-15, derivs)

    def denominator(r: float) -> float:
        vals = at(r)
        return float((vals[0] if c.kind is ClassKind.TSP else vals[1]).real)

    def margin(r: float) -> float:
        return spiral_margin(at(r), r, c)

    prev = 0.0
    for k in range(1, k_max + 1):
        r = 1.0 - 2.0**-k
        if denominator(r) <= 0.0:
            # f or f' vanishes on (prev, r); the margin tends to -inf just below the zero.
            lo, hi = prev, r
            for _ in range(_REFINE_STEPS):
                mid = 0.5 * (lo + hi)
                if denominator(mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            for cand in (lo, 0.5 * (prev + lo)):
                if cand > 0 and denominator(cand) > 0 and margin(cand) < 0:
                    return cand
            prev = r
            continue
        if margin(r) < 0:
            lo, hi = prev, r
            for _ in range(_REFINE_STEPS):
                mid = 0.5 * (lo + hi)
                if mid <= lo or mid >= hi:
                    break
                if denominator(mid) > 0 and margin(mid) < -WITNESS_MARGIN:
                    hi = mid
                else:
                    lo = mid
            return hi
        prev = r
    return None


# -- suites -------------------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: int = 0
    max_rel_error: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, rel_error: float, note: str = ""):
        self.checks += 1
        if rel_error == rel_error:  # skip NaN
            self.max_rel_error = max(self.max_rel_error, rel_error)
        if not ok:
            self.failures += 1
            if note and len(self.notes) < 20:
                self.notes.append(note)


def brute_binomial_series(j: int, q: float, rel_tol: float = 1e-17) -> float:
    """``sum_{n>=0} C(n+j, j) q^n`` by direct accumulation until terms are negligible."""
    total = 0.0
    n = 0
    qn = 1.0
    prev_term = math.inf
    while True:
        term = math.comb(n + j, j) * qn
        total += term
        if term < prev_term and term <= rel_tol * total and n > j:
            return total
        prev_term = term
        n += 1
        qn *= q
        if n > 100_000:
            raise RuntimeError("brute-force series did not settle")


def brute_moments(m: int, q: float, rel_tol: float = 1e-17) -> tuple[float, float, float, float]:
    """Direct sums of b_n, (n-1)b_n, (n-1)(n-2)b_n and b_n/n over n >= 2."""
    surv = (1.0 - q) ** m
    s = [0.0, 0.0, 0.0, 0.0]
    n = 2
    qn = q
    while True:
        b = math.comb(n + m - 2, m - 1) * qn * surv
        terms = (b, (n - 1) * b, (n - 1) * (n - 2) * b, b / n)
        for i, t in enumerate(terms):
            s[i] += t
        if n > m + 2 and terms[2] <= rel_tol * max(s[2], 1e-300) and b <= rel_tol * s[0]:
            return tuple(s)
        n += 1
        qn *= q
        if n > 100_000:
            raise RuntimeError("brute-force moments did not settle")


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def identity_suite(m_values=M_IDENTITY, q_grid=Q_GRID, rel_tol: float = 1e-10) -> SuiteResult:
    res = SuiteResult("identities")
    for m in m_values:
        for q in q_grid:
            p = PascalParams(m, q)
            keys = [k for k in IDENTITIES if identity_terms(k, m)[0] >= 0]
            closed = closed_geometric_sums(p, keys)
            for key in keys:
                brute = brute_binomial_series(identity_terms(key, m)[0], q)
                err = _rel(brute, closed[key])
                res.record(err <= rel_tol, err, f"identity {key} m={m} q={q}: rel {err:.3g}")
            ms = moment_sums(p)
            b0, b1, b2, br = brute_moments(m, q)
            pairs = [("s0", b0, ms.s0), ("s1", b1, ms.s1), ("s2", b2, ms.s2)]
            if ms.s_recip is not None:
                pairs.append(("s_recip", br, ms.s_recip))
            for name, brute, closed_val in pairs:
                err = _rel(brute, closed_val)
                res.record(err <= rel_tol, err, f"{name} m={m} q={q}: rel {err:.3g}")
    return res


def equivalence_suite(
    criterion,
    m_values=M_CRITERIA,
    q_grid=Q_GRID,
    alphas=ALPHAS,
    betas=BETAS,
    rel_tol: float = 1e-9,
    rtau: RTauParams | None = None,
    sum_tol: float = 1e-13,
) -> SuiteResult:
    """Closed form against certified coefficient sum, plus verdict agreement."""
    criterion = Criterion(criterion)
    res = SuiteResult(f"equivalence_{criterion.value}")
    for m in m_values:
        if m < criterion.min_m:
            continue
        for q in q_grid:
            p = PascalParams(m, q)
            for alpha in alphas:
                for beta in betas:
                    c = ClassParams(alpha, beta, criterion.kind)
                    closed = closed_form(criterion, p, c, rtau)
                    numeric = numeric_oracle(criterion, p, c, sum_tol, rtau)
                    rep = equivalence_report(closed.lhs, (numeric.lhs, numeric.error_bound), rel_tol)
                    same = closed.in_class == numeric.in_class
                    err = rep.difference / max(1.0, abs(closed.lhs))
                    res.record(
                        rep.passed and same,
                        err,
                        f"{criterion.value} m={m} q={q} a={alpha:.4f} b={beta}: diff {rep.difference:.3g}, "
                        f"verdicts {closed.verdict}/{numeric.verdict}",
                    )
    return res


def soundness_suite(
    m_values=M_CRITERIA, q_grid=Q_GRID, alphas=ALPHAS, betas=BETAS, rel_tol: float = 1e-9
) -> SuiteResult:
    """Operator criteria on the extremal stream, and the thm4 = (A-B)|tau| thm1 identity."""
    res = SuiteResult("operator_soundness")
    for A, B in RTAU_AB:
        for modulus in TAU_MODULI:
            r = RTauParams(modulus, A, B)
            for crit in (Criterion.THM3, Criterion.THM4):
                sub = equivalence_suite(crit, m_values, q_grid, alphas, betas, rel_tol, r)
                res.checks += sub.checks
                res.failures += sub.failures
                res.max_rel_error = max(res.max_rel_error, sub.max_rel_error)
                res.notes.extend(sub.notes[: max(0, 20 - len(res.notes))])
            for m in m_values:
                for q in q_grid:
                    p = PascalParams(m, q)
                    for alpha in alphas:
                        for beta in betas:
                            c = ClassParams(alpha, beta, ClassKind.UCT)
                            lhs4 = thm4_lhs(p, c, r)
                            scaled = r.scale * thm1_lhs(p, c.with_kind(ClassKind.TSP))
                            err = _rel(lhs4, scaled) if scaled else abs(lhs4)
                            res.record(err <= 1e-12, err, f"thm4 scaling A={A} B={B} |tau|={modulus} m={m} q={q}")
    return res


def run_all() -> list[SuiteResult]:
    suites = [identity_suite()]
    for crit in (Criterion.THM1, Criterion.THM2, Criterion.THM5, Criterion.THM6):
        suites.append(equivalence_suite(crit))
    suites.append(soundness_suite())
    return suites


__all__ = [
    "EquivalenceReport",
    "SuiteResult",
    "TailBound",
    "brute_binomial_series",
    "brute_moments",
    "certified_sum",
    "equivalence_report",
    "equivalence_suite",
    "identity_suite",
    "necessity_witness",
    "run_all",
    "soundness_suite",
]
