from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import nbinom

from pascalspiral.errors import DomainError
from pascalspiral.pascal_core import (
    PascalParams,
    closed_geometric_sums,
    coefficient,
    coefficient_array,
    coefficient_ratio,
    eval_G,
    eval_G_deriv,
    eval_phi,
    eval_phi_deriv,
    eval_psi,
    integral_series,
    moment_sums,
    pascal_series,
    pmf,
    reciprocal_moment,
)
from pascalspiral.verify import brute_moments

ms = st.integers(min_value=1, max_value=12)
qs = st.floats(min_value=0.0, max_value=0.95)


@pytest.mark.parametrize("m,q", [(1, 0.5), (3, 0.2), (10, 0.7)])
def test_pmf_matches_scipy(m, q):
    p = PascalParams(m, q)
    for k in range(40):
        assert pmf(k, p) == pytest.approx(nbinom.pmf(k, m, 1 - q), rel=1e-12, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(ms, qs)
def test_pmf_sums_to_one(m, q):
    p = PascalParams(m, q)
    total = math.fsum(pmf(k, p) for k in range(4000))
    assert total == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(ms, qs, st.integers(min_value=2, max_value=200))
def test_recurrence_matches_direct(m, q, n):
    p = PascalParams(m, q)
    direct = coefficient(n, p).value
    assert coefficient_array(p, n)[-1] == pytest.approx(direct, rel=1e-10, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(ms, st.floats(min_value=0.01, max_value=0.95), st.integers(min_value=2, max_value=300))
def test_ratio_bound_is_valid_and_decreasing(m, q, n):
    p = PascalParams(m, q)
    assert coefficient_ratio(n + 1, p) <= coefficient_ratio(n, p) * (1 + 1e-15)
    b = coefficient_array(p, n + 1)
    if b[-2] > 0:
        assert b[-1] / b[-2] <= coefficient_ratio(n, p) * (1 + 1e-12)


def test_params_validation():
    for bad in [(0, 0.5), (1, 1.0), (1, -0.1), (2.5, 0.1), (True, 0.1)]:
        with pytest.raises(DomainError):
            PascalParams(*bad)
    with pytest.raises(DomainError):
        coefficient(1, PascalParams(1, 0.2))


def test_lowest_order_identity_needs_m_two():
    with pytest.raises(DomainError):
        closed_geometric_sums(PascalParams(1, 0.3), ["j=m-2"])
    assert closed_geometric_sums(PascalParams(2, 0.3), ["j=m-2"])["j=m-2"] == pytest.approx(1 / 0.7)


@pytest.mark.parametrize("m", [1, 2, 4, 9])
@pytest.mark.parametrize("q", [0.05, 0.4, 0.85])
def test_moment_sums_against_brute(m, q):
    got = moment_sums(PascalParams(m, q))
    b0, b1, b2, br = brute_moments(m, q)
    assert got.s0 == pytest.approx(b0, rel=1e-11)
    assert got.s1 == pytest.approx(b1, rel=1e-11)
    assert got.s2 == pytest.approx(b2, rel=1e-11)
    if m > 1:
        assert got.s_recip == pytest.approx(br, rel=1e-11)
    else:
        assert got.s_recip is None


def test_reciprocal_moment_edge_cases():
    assert reciprocal_moment(PascalParams(3, 0.0)) == 0.0
    with pytest.raises(DomainError):
        reciprocal_moment(PascalParams(1, 0.3))
    with pytest.raises(DomainError):
        moment_sums(PascalParams(1, 0.3), with_recip=True)


def test_phi_and_psi_closed_form_m1():
    # m = 1: b_n = q^(n-1)(1-q), so Psi(z) = z + (1-q) q z^2 / (1 - q z)
    q = 0.35
    p = PascalParams(1, q)
    z = 0.4 + 0.5j
    tail = (1 - q) * q * z * z / (1 - q * z)
    assert eval_psi(z, p) == pytest.approx(z + tail, abs=1e-14)
    assert eval_phi(z, p) == pytest.approx(z - tail, abs=1e-14)
    assert eval_phi(z, p) + eval_psi(z, p) == pytest.approx(2 * z, abs=1e-14)


def test_derivatives_by_finite_difference():
    p = PascalParams(3, 0.4)
    z, h = 0.3 - 0.2j, 1e-6
    d_phi = (eval_phi(z + h, p) - eval_phi(z - h, p)) / (2 * h)
    assert eval_phi_deriv(z, p) == pytest.approx(d_phi, abs=1e-8)
    d_g = (eval_G(z + h, p) - eval_G(z - h, p)) / (2 * h)
    assert eval_G_deriv(z, p) == pytest.approx(d_g, abs=1e-8)
    # G' = Phi(z)/z
    assert eval_G_deriv(z, p) == pytest.approx(eval_phi(z, p) / z, abs=1e-13)


def test_evaluation_outside_disk_refused():
    with pytest.raises(DomainError):
        eval_phi(1.0, PascalParams(2, 0.3))


def test_q_zero_gives_identity():
    p = PascalParams(4, 0.0)
    assert eval_phi(0.7j, p) == 0.7j
    assert pascal_series(p).coefficients(5).tolist() == [0.0] * 6


def test_integral_series_coefficients():
    p = PascalParams(2, 0.5)
    g = integral_series(p).coefficients(6)
    b = np.array([0, 0] + coefficient_array(p, 6))
    for n in range(2, 7):
        assert g[n] == pytest.approx(b[n] / n, rel=1e-14)
