"""Coefficient streams and certified truncated summation.

A :class:`CoefficientSeries` stores the moduli ``|a_n|`` (n >= 2) of a
normalized power series together with enough growth information to bound
the discarded tail of any weighted sum rigorously.  Every infinite sum in
the package goes through :func:`certified_sum` / :func:`power_sum`.
"""

from __future__ import annotations

import enum
import itertools
import math
import sys
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import CertificationError, UnboundedSumError

EPS = sys.float_info.epsilon
# Rounding allowance per summed term, in units of eps * sum|t_n|.
_ROUNDING_ULPS = 16
MAX_TERMS = 2_000_000


class SignConvention(str, enum.Enum):
    T_CLASS_NEGATIVE = "T_class_negative"  # f(z) = z - sum |a_n| z^n
    GENERAL = "general"  # f(z) = z + sum a_n z^n

    @property
    def sign(self) -> float:
        return -1.0 if self is SignConvention.T_CLASS_NEGATIVE else 1.0


@dataclass(frozen=True)
class CoefficientSeries:
    """Nonnegative coefficient stream ``n -> |a_n|`` for n >= 2.

    ``ratio_bound(n)`` must dominate ``a_{k+1}/a_k`` for every k >= n, and
    ``ratio_limit`` is its limit as n grows.  A stream with finite
    ``support`` (last possibly nonzero index) needs neither.  When given,
    ``stream()`` returns a fresh iterator over ``a_2, a_3, ...``, letting
    sequential sums walk the coefficients by recurrence instead of calling
    ``coeff_at`` once per index.
    """

    coeff_at: Callable[[int], float]
    ratio_bound: Callable[[int], float] | None = None
    ratio_limit: float | None = None
    support: int | None = None
    sign_convention: SignConvention = SignConvention.T_CLASS_NEGATIVE
    stream: Callable[[], Iterator[float]] | None = None

    def iter_coeffs(self) -> Iterator[tuple[int, float]]:
        """Yield ``(n, |a_n|)`` from n = 2 on, stopping after ``support`` if finite."""
        values = self.stream() if self.stream is not None else map(self.coeff_at, itertools.count(2))
        for n, a in zip(itertools.count(2), values):
            if self.support is not None and n > self.support:
                return
            yield n, a

    @classmethod
    def zero(cls, sign_convention=SignConvention.T_CLASS_NEGATIVE) -> "CoefficientSeries":
        return cls(lambda n: 0.0, support=1, sign_convention=sign_convention)

    @classmethod
    def finite(
        cls,
        coeffs: Sequence[float],
        sign_convention=SignConvention.T_CLASS_NEGATIVE,
    ) -> "CoefficientSeries":
        """Stream with ``coeffs[0] = |a_2|, coeffs[1] = |a_3|, ...`` and zeros after."""
        values = tuple(abs(float(c)) for c in coeffs)
        last = len(values) + 1

        def coeff_at(n: int) -> float:
            return values[n - 2] if 2 <= n <= last else 0.0

        return cls(coeff_at, support=last, sign_convention=sign_convention)

    @classmethod
    def harmonic(cls, scale: float, sign_convention=SignConvention.GENERAL) -> "CoefficientSeries":
        """The stream ``scale / n``; ratios n/(n+1) stay below 1 but tend to it."""
        if scale < 0:
            raise ValueError("scale must be nonnegative")
        return cls(
            lambda n: scale / n,
            ratio_bound=lambda n: 1.0,
            ratio_limit=1.0,
            sign_convention=sign_convention,
            stream=lambda: (scale / n for n in itertools.count(2)),
        )

    @property
    def certifiable(self) -> bool:
        return self.support is not None or self.ratio_bound is not None

    def hadamard(self, other: "CoefficientSeries", sign_convention=None) -> "CoefficientSeries":
        """Termwise product; growth data combine multiplicatively."""
        if self.support is not None and other.support is not None:
            support = min(self.support, other.support)
        else:
            support = self.support if self.support is not None else other.support
        ratio_bound = None
        ratio_limit = None
        if self.ratio_bound is not None and other.ratio_bound is not None:
            rb1, rb2 = self.ratio_bound, other.ratio_bound
            ratio_bound = lambda n: rb1(n) * rb2(n)  # noqa: E731
            if self.ratio_limit is not None and other.ratio_limit is not None:
                ratio_limit = self.ratio_limit * other.ratio_limit
        c1, c2 = self.coeff_at, other.coeff_at
        stream = None
        if self.stream is not None or other.stream is not None:
            left, right = self, other

            def stream():
                return (x * y for (_, x), (_, y) in zip(left.iter_coeffs(), right.iter_coeffs()))

        return CoefficientSeries(
            lambda n: c1(n) * c2(n),
            ratio_bound=ratio_bound,
            ratio_limit=ratio_limit,
            support=support,
            sign_convention=sign_convention or self.sign_convention,
            stream=stream,
        )

    def coefficients(self, n_max: int) -> np.ndarray:
        """Array ``c`` with ``c[n] = |a_n|`` for 2 <= n <= n_max (zeros below)."""
        out = np.zeros(n_max + 1)
        for n, a in self.iter_coeffs():
            if n > n_max:
                break
            out[n] = a
        return out

    def check_growth(self, n_max: int = 1000, rel_slack: float = 1e-12) -> bool:
        """Sample ``a_{n+1}/a_n <= ratio_bound(n)`` for 2 <= n < n_max."""
        if self.ratio_bound is None:
            return self.support is not None
        prev = self.coeff_at(2)
        for n in range(2, n_max):
            nxt = self.coeff_at(n + 1)
            if prev > 0 and nxt > prev * self.ratio_bound(n) * (1 + rel_slack):
                return False
            if prev == 0 and nxt > 0:
                return False
            prev = nxt
        return True


@dataclass(frozen=True)
class PolyWeight:
    """Polynomial weight ``w(n) = sum coeffs[k] n^k`` with only real roots.

    Past the largest root, w is positive and ``w(n+1)/w(n)`` decreases, so
    the ratio at the start of a tail bounds every later ratio.
    """

    coeffs: tuple[float, ...]
    max_root: float

    @classmethod
    def of(cls, coeffs: Sequence[float]) -> "PolyWeight":
        coeffs = tuple(float(c) for c in coeffs)
        trimmed = P.polytrim(np.array(coeffs, dtype=float))
        if not np.any(trimmed) or trimmed[-1] <= 0:
            raise ValueError(f"weight needs a positive leading coefficient: {coeffs}")
        roots = P.polyroots(trimmed) if len(trimmed) > 1 else np.array([])
        if np.any(np.abs(np.imag(roots)) > 1e-9):
            raise ValueError(f"weight must have real roots only: {coeffs}")
        max_root = float(np.max(np.real(roots))) if len(roots) else -math.inf
        return cls(tuple(float(c) for c in trimmed), max_root)

    def __call__(self, n: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc


ONE = PolyWeight.of([1.0])
LINEAR_N = PolyWeight.of([0.0, 1.0])
FALLING_N2 = PolyWeight.of([0.0, -1.0, 1.0])  # n(n-1)


def as_weight(weight) -> PolyWeight:
    if isinstance(weight, PolyWeight):
        return weight
    if isinstance(weight, np.polynomial.Polynomial):
        return PolyWeight.of(weight.coef)
    return PolyWeight.of(weight)


@dataclass(frozen=True)
class TailBound:
    """Geometric bound on ``sum_{k > start_index} t_k``."""

    start_index: int
    ratio: float
    first_term: float
    bound_value: float

    @classmethod
    def geometric(cls, start_index: int, ratio: float, first_term: float) -> "TailBound":
        if not 0.0 <= ratio < 1.0:
            raise CertificationError(f"tail ratio {ratio} is not below 1")
        return cls(start_index, ratio, first_term, first_term * ratio / (1.0 - ratio))


@dataclass(frozen=True)
class PartialSum:
    value: complex | float
    error_bound: float
    last_index: int
    tail: TailBound | None


def power_sum(
    series: CoefficientSeries,
    weight,
    tol: float,
    z: complex | float = 1.0,
    shift: int = 0,
) -> PartialSum:
    """Certified ``sum_{n>=2} |a_n| w(n) z^(n - shift)``.

    Summation stops at the first index N whose geometric tail bound is at
    most ``tol``.  ``error_bound`` adds a floating-point allowance to the
    tail bound, so it can exceed ``tol`` when tol sits below rounding level.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    w = as_weight(weight)
    z_abs = abs(z)
    if series.support is None:
        if series.ratio_bound is None:
            raise CertificationError("series carries no growth bound or finite support")
        if series.ratio_limit is not None and series.ratio_limit * z_abs >= 1.0:
            raise UnboundedSumError(
                f"coefficient ratio tends to {series.ratio_limit * z_abs:g} >= 1"
            )
    terms: list = []
    abs_total = 0.0
    tail = None
    tail_value = 0.0
    last = 1
    zpow = z ** (2 - shift)
    ratio_bound = series.ratio_bound
    finite = series.support is not None
    w_next = w(2)
    for n, a in series.iter_coeffs():
        last = n
        wn = w_next
        w_next = w(n + 1)
        t = a * wn * zpow
        terms.append(t)
        abs_total += abs(t)
        if not finite:
            if a == 0.0:
                # a_{k+1} <= ratio * a_k keeps every later coefficient at zero.
                break
            if n > w.max_root:
                rho = ratio_bound(n) * (w_next / wn) * z_abs
                if rho < 1.0:
                    first = abs(t)
                    if first * rho / (1.0 - rho) <= tol:
                        tail = TailBound.geometric(n, rho, first)
                        tail_value = tail.bound_value
                        break
        if n >= MAX_TERMS:
            raise CertificationError(f"no certified tail within {MAX_TERMS} terms")
        zpow = zpow * z
    if terms and isinstance(terms[0], complex):
        value: complex | float = complex(
            math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)
        )
    else:
        value = math.fsum(terms)  # empty stream sums to 0.0
    error = tail_value + _ROUNDING_ULPS * EPS * abs_total
    return PartialSum(value, error, last, tail if tail_value else None)


def certified_sum(series: CoefficientSeries, weight, tol: float) -> tuple[float, float]:
    """Return ``(value, error_bound)`` for ``sum_{n>=2} w(n) |a_n|``."""
    res = power_sum(series, weight, tol)
    return float(res.value), res.error_bound


_DERIV_WEIGHTS = {0: (ONE, 0), 1: (LINEAR_N, 1), 2: (FALLING_N2, 2)}
_LEADING = {0: lambda z: z, 1: lambda z: 1.0 + 0.0 * z, 2: lambda z: 0.0 * z}


def evaluate(series: CoefficientSeries, z: complex, tol: float = 1e-14, derivative: int = 0) -> complex:
    """Value of ``f^(derivative)(z)`` for ``f(z) = z -/+ sum |a_n| z^n``."""
    if abs(z) >= 1.0:
        raise ValueError(f"|z| = {abs(z)} is outside the open unit disk")
    weight, shift = _DERIV_WEIGHTS[derivative]
    s = power_sum(series, weight, tol, complex(z), shift)
    return complex(_LEADING[derivative](complex(z)) + series.sign_convention.sign * s.value)


def truncation_index(series: CoefficientSeries, radius: float, tol: float, derivative: int = 0) -> int:
    """Smallest certified stopping index valid for every ``|z| <= radius``."""
    weight, shift = _DERIV_WEIGHTS[derivative]
    return power_sum(series, weight, tol, float(radius), shift).last_index


def polynomial_evaluator(
    series: CoefficientSeries,
    radius: float,
    tol: float = 1e-14,
    derivatives: Sequence[int] = (0,),
) -> Callable:
    """Truncate once, certified for ``|z| <= radius``, and return a vectorized evaluator.

    The returned callable maps points to a list with one array per entry of
    ``derivatives``.  Tail bounds grow with ``|z|``, so the truncation index
    chosen at ``radius`` is valid for every point inside it.
    """
    if radius >= 1.0:
        raise ValueError("radius must be below 1")
    n_max = max(truncation_index(series, radius, tol, d) for d in derivatives)
    coef = np.zeros(max(n_max, 1) + 1)
    coef[1] = 1.0
    coef[2:] = series.sign_convention.sign * series.coefficients(n_max)[2:]
    polys = [P.polyder(coef, d) if d else coef for d in derivatives]

    def at(zs):
        zs = np.asarray(zs, dtype=complex)
        if zs.size and np.max(np.abs(zs)) > radius:
            raise ValueError("point outside the certified radius")
        return [P.polyval(zs, c) for c in polys]

    return at


def evaluate_many(
    series: CoefficientSeries,
    zs,
    tol: float = 1e-14,
    derivatives: Sequence[int] = (0,),
) -> list[np.ndarray]:
    """Vectorized :func:`evaluate` at many points for several derivative orders."""
    zs = np.asarray(zs, dtype=complex)
    radius = float(np.max(np.abs(zs))) if zs.size else 0.0
    if radius >= 1.0:
        raise ValueError("all points must lie in the open unit disk")
    return polynomial_evaluator(series, radius, tol, derivatives)(zs)
