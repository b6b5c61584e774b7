from __future__ import annotations

import math

import numpy as np
import pytest

from pascalspiral.class_criteria import (
    ClassKind,
    ClassParams,
    Criterion,
    CriterionKind,
    Method,
    closed_form,
    corollary_beta0,
    disk_points,
    geometric_sample,
    lemma1_sum,
    lemma2_sum,
    numeric_oracle,
    spiral_margin,
    target_series,
    thm1_closed,
    thm2_closed,
    thm6_closed,
)
from pascalspiral.errors import DomainError, EvaluationError, PreconditionError, UnboundedSumError
from pascalspiral.pascal_core import PascalParams
from pascalspiral.series import CoefficientSeries

TSP0 = ClassParams(0.0, 0.0, ClassKind.TSP)
UCT0 = ClassParams(0.0, 0.0, ClassKind.UCT)


def test_class_params_validation():
    with pytest.raises(DomainError):
        ClassParams(math.pi / 2, 0.0)
    with pytest.raises(DomainError):
        ClassParams(0.0, -0.1)
    c = ClassParams(math.pi / 3, 0.25)
    assert c.rhs == pytest.approx(0.25)
    assert c.shift == pytest.approx(0.75)


def test_thm1_worked_example():
    v = thm1_closed(PascalParams(1, 0.1), TSP0)
    assert v.in_class
    assert v.margin == pytest.approx(1 - (0.2 / 0.9 + 0.1), abs=1e-14)
    assert v.verdict == "in_class"


def test_thm1_out_of_class():
    v = thm1_closed(PascalParams(1, 0.5), TSP0)
    assert v.lhs == pytest.approx(2.5)
    assert v.verdict == "not_in_class"


def test_thm2_m1_cubic():
    # at m = 1 the criterion reduces to q^3 - 4q^2 + 8q - 1 <= 0
    for q in (0.05, 0.1, 0.2, 0.5):
        v = thm2_closed(PascalParams(1, q), UCT0)
        assert v.in_class == (q**3 - 4 * q**2 + 8 * q - 1 <= 0)


def test_thm6_refuses_m1_and_is_zero_at_q0():
    with pytest.raises(DomainError):
        thm6_closed(PascalParams(1, 0.2), TSP0)
    assert thm6_closed(PascalParams(3, 0.0), TSP0).lhs == 0.0


def test_closed_form_at_q0_is_margin_rhs():
    for crit in (Criterion.THM1, Criterion.THM2, Criterion.THM5):
        c = ClassParams(0.3, 0.5, crit.kind)
        v = closed_form(crit, PascalParams(3, 0.0), c)
        assert v.lhs == 0.0 and v.margin == pytest.approx(c.rhs)


def test_lemma_kind_mismatch_is_precondition_error():
    f = target_series(Criterion.THM1, PascalParams(2, 0.3))
    with pytest.raises(PreconditionError):
        lemma1_sum(f, UCT0)
    with pytest.raises(PreconditionError):
        lemma2_sum(f, TSP0)


def test_lemma_sum_on_divergent_stream_carries_verdict():
    with pytest.raises(UnboundedSumError) as info:
        lemma1_sum(CoefficientSeries.harmonic(1.0), TSP0)
    assert info.value.verdict.in_class is False


@pytest.mark.parametrize("crit", ["thm1", "thm2", "thm5", "thm6"])
def test_numeric_oracle_agrees(crit):
    p = PascalParams(3, 0.35)
    c = ClassParams(-math.pi / 6, 0.25)
    closed = closed_form(crit, p, c.with_kind(Criterion(crit).kind))
    numeric = numeric_oracle(crit, p, c)
    assert numeric.method is Method.NUMERIC_SUM
    assert abs(closed.lhs - numeric.lhs) <= 1e-9 * max(1, abs(closed.lhs)) + numeric.error_bound
    assert closed.in_class == numeric.in_class


def test_corollary_beta0_is_general_path():
    p = PascalParams(2, 0.3)
    for crit in ("thm1", "thm2", "thm5", "thm6"):
        a = corollary_beta0(p, math.pi / 6, crit)
        b = closed_form(crit, p, ClassParams(math.pi / 6, 0.0, Criterion(crit).kind))
        assert a == b


def test_criterion_metadata():
    assert Criterion.for_target("phi", ClassKind.UCT) is Criterion.THM2
    assert Criterion.for_target("g", ClassKind.TSP) is Criterion.THM6
    assert Criterion.for_target("g", ClassKind.UCT) is Criterion.THM5
    assert Criterion.THM3.criterion_kind is CriterionKind.SUFFICIENT
    assert Criterion.THM6.min_m == 2


def test_spiral_margin_identity_function():
    # f(z) = z: w = 1 everywhere, so the margin is cos(alpha) - beta
    c = ClassParams(math.pi / 6, 0.2, ClassKind.TSP)
    z = np.array([0.0, 0.5, 0.3j])
    vals = (z, np.ones_like(z))
    assert np.allclose(spiral_margin(vals, z, c), math.cos(math.pi / 6) - 0.2)
    u = c.with_kind(ClassKind.UCT)
    assert np.allclose(spiral_margin((z, np.ones_like(z), np.zeros_like(z)), z, u), math.cos(math.pi / 6) - 0.2)


def test_spiral_margin_vanishing_denominator():
    with pytest.raises(EvaluationError):
        spiral_margin((0.0, 1.0), 0.5, TSP0)


def test_disk_points_deterministic_and_inside():
    a, b = disk_points(500), disk_points(500)
    assert np.array_equal(a, b)
    assert np.all(np.abs(a) <= 0.999)


def test_geometric_sample_is_evidence():
    p = PascalParams(1, 0.1)
    v = geometric_sample(target_series("thm1", p), TSP0, 300)
    assert v.criterion_kind is CriterionKind.EVIDENCE
    assert v.in_class
