from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.stats import nbinom

from pascalspiral.class_criteria import ClassKind, ClassParams, target_series, spiral_margin
from pascalspiral.errors import PreconditionError
from pascalspiral.pascal_core import PascalParams, eval_phi, eval_phi_deriv
from pascalspiral.series import PolyWeight, certified_sum, power_sum
from pascalspiral.pascal_core import pascal_series
from pascalspiral.verify import (
    brute_binomial_series,
    equivalence_report,
    identity_suite,
    necessity_witness,
)

TSP0 = ClassParams(0.0, 0.0, ClassKind.TSP)


def test_brute_binomial_series():
    assert brute_binomial_series(0, 0.5) == pytest.approx(2.0, rel=1e-15)
    assert brute_binomial_series(2, 0.3) == pytest.approx(0.7**-3, rel=1e-13)


def test_equivalence_report():
    assert equivalence_report(1.0, (1.0 + 1e-10, 0.0), 1e-9).passed
    assert not equivalence_report(1.0, (1.1, 1e-3), 1e-9).passed
    assert equivalence_report(1.0, (1.1, 0.2), 1e-9).passed


@pytest.mark.parametrize("m,q", [(1, 0.5), (2, 0.8)])
def test_witness_found_and_negative(m, q):
    p = PascalParams(m, q)
    r = necessity_witness(p, TSP0, "thm1")
    assert r is not None and 0 < r < 1
    margin = spiral_margin((eval_phi(r, p), eval_phi_deriv(r, p)), r, TSP0)
    assert margin < 0


def test_witness_precondition():
    with pytest.raises(PreconditionError):
        necessity_witness(PascalParams(1, 0.1), TSP0, "thm1")
    with pytest.raises(PreconditionError):
        necessity_witness(PascalParams(2, 0.5), TSP0, "thm4")


def test_identity_suite_small_grid():
    res = identity_suite(m_values=(1, 2, 3), q_grid=(0.1, 0.5, 0.9))
    assert res.passed, res.notes


@pytest.mark.parametrize("m,q", [(1, 0.3), (3, 0.6), (10, 0.85)])
def test_error_bound_is_honest(m, q):
    # a tighter tolerance never moves the value by more than the reported bound
    series = pascal_series(PascalParams(m, q))
    for weight in ([1.0], [-1.0, 2.0], [0.0, -1.0, 2.0]):
        for tol in (1e-6, 1e-9, 1e-12):
            value, err = certified_sum(series, weight, tol)
            finer, _ = certified_sum(series, weight, tol / 10)
            assert abs(value - finer) <= err


@pytest.mark.parametrize("m,q", [(1, 0.3), (4, 0.5), (10, 0.9)])
def test_tail_ratio_valid_over_many_indices(m, q):
    p = PascalParams(m, q)
    series = pascal_series(p)
    w = PolyWeight.of([0.0, -math.cos(0.3) - 0.25, 2.0])
    res = power_sum(series, w, 1e-12)
    tail = res.tail
    assert tail is not None
    # log-space pmf ratios: float coefficients go subnormal well before n0 + 1000
    n0 = tail.start_index
    ns = np.arange(n0, n0 + 1000)
    log_b = nbinom.logpmf(ns - 1, m, 1 - q)
    log_next = nbinom.logpmf(ns, m, 1 - q)
    weights = np.array([w(n + 1) / w(n) for n in ns])
    worst = float(np.max(np.exp(log_next - log_b) * weights))
    assert worst <= tail.ratio * (1 + 1e-12)
