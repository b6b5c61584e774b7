"""Pascal (negative binomial) probabilities and the power series built on them.

The coefficient of ``z^n`` (n >= 2) in both series is

    b_n = C(n+m-2, m-1) q^(n-1) (1-q)^m = pmf(n-1),

with ``Psi(z) = z + sum b_n z^n``, ``Phi(z) = 2z - Psi(z)`` and
``G(z) = z - sum b_n z^n / n`` (the primitive of ``Phi(t)/t``).
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass

from .errors import DomainError
from .series import CoefficientSeries, SignConvention, evaluate

DEFAULT_TOL = 1e-14


@dataclass(frozen=True)
class PascalParams:
    m: int
    q: float

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be an integer >= 1, got {self.m!r}")
        if not (0.0 <= self.q < 1.0):
            raise DomainError(f"q must lie in [0, 1), got {self.q!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "q", float(self.q))

    @property
    def survival(self) -> float:
        """``(1-q)^m``, the probability of zero failures."""
        return math.exp(self.m * math.log1p(-self.q))

    @property
    def mass_beyond_zero(self) -> float:
        """``1 - (1-q)^m`` without cancellation at small q."""
        return -math.expm1(self.m * math.log1p(-self.q))


@dataclass(frozen=True)
class SeriesCoefficient:
    n: int
    value: float


@dataclass(frozen=True)
class MomentSums:
    s0: float
    s1: float
    s2: float
    s_recip: float | None


def _binom_weighted(top: int, k: int, q: float, log_tail: float) -> float:
    """``C(top, k) * q^e * exp(log_tail)`` with e = top - k, guarding over/underflow."""
    c = math.comb(top, k)
    e = top - k
    if e == 0:
        return float(c) * math.exp(log_tail)
    if q == 0.0:
        return 0.0
    log_val = math.log(c) + e * math.log(q) + log_tail
    if c < 1e300 and log_val > -700.0 and e * math.log(q) > -700.0:
        return float(c) * q**e * math.exp(log_tail)
    return math.exp(log_val)


def pmf(k: int, p: PascalParams) -> float:
    """``P(x = k) = C(k+m-1, m-1) q^k (1-q)^m``."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    return _binom_weighted(k + p.m - 1, p.m - 1, p.q, p.m * math.log1p(-p.q))


def coefficient(n: int, p: PascalParams) -> SeriesCoefficient:
    if n < 2:
        raise DomainError(f"coefficient index must be >= 2, got {n}")
    return SeriesCoefficient(n, pmf(n - 1, p))


def coefficient_ratio(n: int, p: PascalParams) -> float:
    """``b_{n+1}/b_n = q (n+m-1)/n``; decreasing in n with limit q."""
    return p.q * (n + p.m - 1) / n


def iter_coefficients(p: PascalParams):
    """``b_2, b_3, ...`` by the multiplicative recurrence from b_2."""
    b = p.m * p.q * p.survival
    n = 2
    while True:
        yield b
        b = b * (p.q * (n + p.m - 1) / n)
        n += 1


def coefficient_array(p: PascalParams, n_max: int) -> list[float]:
    """``[b_2, ..., b_{n_max}]`` by recurrence."""
    return list(itertools.islice(iter_coefficients(p), max(n_max - 1, 0)))


def pascal_series(p: PascalParams) -> CoefficientSeries:
    """Coefficient stream of ``Phi`` (T-class sign convention)."""
    m, q = p.m, p.q
    if q == 0.0:
        return CoefficientSeries.zero()
    return CoefficientSeries(
        lambda n: pmf(n - 1, p),
        ratio_bound=lambda n: q * (n + m - 1) / n,
        ratio_limit=q,
        stream=lambda: iter_coefficients(p),
    )


def integral_series(p: PascalParams) -> CoefficientSeries:
    """Coefficient stream ``b_n / n`` of ``G``."""
    return pascal_series(p).hadamard(CoefficientSeries.harmonic(1.0), SignConvention.T_CLASS_NEGATIVE)


# -- closed-form summation identities -------------------------------------

IDENTITIES = ("j=m-1", "j=m-2", "j=m", "j=m+1")


def identity_terms(which: str, m: int) -> tuple[int, int]:
    """``(j, e)`` such that the identity reads ``sum C(n+j, j) q^n = (1-q)^-e``."""
    table = {"j=m-1": (m - 1, m), "j=m-2": (m - 2, m - 1), "j=m": (m, m + 1), "j=m+1": (m + 1, m + 2)}
    if which not in table:
        raise KeyError(which)
    return table[which]


def closed_geometric_sums(p: PascalParams, which=IDENTITIES) -> dict[str, float]:
    """Closed forms of the negative binomial series ``sum_{n>=0} C(n+j, j) q^n``.

    Keys name the binomial order j.  ``"j=m-2"`` is only defined for m >= 2.
    """
    out = {}
    for key in which:
        j, e = identity_terms(key, p.m)
        if j < 0:
            raise DomainError(f"identity {key} needs m >= 2, got m={p.m}")
        out[key] = math.exp(-e * math.log1p(-p.q))
    return out


def moment_sums(p: PascalParams, with_recip: bool | None = None) -> MomentSums:
    """Closed forms of ``sum b_n``, ``sum (n-1) b_n``, ``sum (n-1)(n-2) b_n`` and ``sum b_n/n``.

    ``s_recip`` needs m > 1.  By default it is filled in whenever m > 1 and
    left ``None`` for m = 1; ``with_recip=True`` at m = 1 is a domain error.
    """
    m, q = p.m, p.q
    if with_recip and m == 1:
        raise DomainError("sum b_n/n has no closed form of this type for m = 1")
    s0 = p.mass_beyond_zero
    s1 = q * m / (1.0 - q)
    s2 = q * q * m * (m + 1) / (1.0 - q) ** 2
    s_recip = None
    if m > 1 and with_recip is not False:
        s_recip = reciprocal_moment(p)
    return MomentSums(s0, s1, s2, s_recip)


def reciprocal_moment(p: PascalParams) -> float:
    """``sum_{n>=2} b_n / n`` for m > 1; 0 at q = 0 by continuity."""
    m, q = p.m, p.q
    if m < 2:
        raise DomainError("sum b_n/n closed form requires m > 1")
    if q == 0.0:
        return 0.0
    surv = p.survival
    return ((1.0 - q) - surv - q * (m - 1) * surv) / (q * (m - 1))


# -- evaluation on the disk ----------------------------------------------


def _check_disk(z: complex) -> complex:
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} is outside the open unit disk")
    return z


def eval_phi(z: complex, p: PascalParams, tol: float = DEFAULT_TOL) -> complex:
    return evaluate(pascal_series(p), _check_disk(z), tol)


def eval_psi(z: complex, p: PascalParams, tol: float = DEFAULT_TOL) -> complex:
    series = dataclasses.replace(pascal_series(p), sign_convention=SignConvention.GENERAL)
    return evaluate(series, _check_disk(z), tol)


def eval_phi_deriv(z: complex, p: PascalParams, tol: float = DEFAULT_TOL, order: int = 1) -> complex:
    return evaluate(pascal_series(p), _check_disk(z), tol, derivative=order)


def eval_G(z: complex, p: PascalParams, tol: float = DEFAULT_TOL) -> complex:
    return evaluate(integral_series(p), _check_disk(z), tol)


def eval_G_deriv(z: complex, p: PascalParams, tol: float = DEFAULT_TOL, order: int = 1) -> complex:
    return evaluate(integral_series(p), _check_disk(z), tol, derivative=order)


def apply_operator(f: CoefficientSeries, p: PascalParams) -> CoefficientSeries:
    """Coefficients ``b_n a_n`` of the Hadamard product ``Psi * f``."""
    return pascal_series(p).hadamard(f, f.sign_convention)
