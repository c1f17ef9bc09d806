"""Exact rationals, working-precision settings and the integer sequences used everywhere else."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

Rational = Fraction
BigFloat = mpmath.mpf

__all__ = [
    "Rational",
    "BigFloat",
    "PrecisionCtx",
    "bernoulli",
    "pochhammer",
    "binom",
    "faulhaber",
    "to_bigfloat",
]


@dataclass(frozen=True)
class PrecisionCtx:
    """Numeric settings shared by the evaluators.

    ``bits`` is the mpmath working precision, ``tail_tol`` the absolute bound
    a series tail must fall below, ``max_terms`` a hard cap on summation length.
    """

    bits: int = 192
    tail_tol: float = 1e-40
    max_terms: int = 200_000

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError(f"precision must be at least 64 bits, got {self.bits}")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")

    def workprec(self, extra: int = 0):
        return mpmath.workprec(self.bits + extra)


def to_bigfloat(x: Fraction | int) -> mpmath.mpf:
    """Correctly rounded conversion at the current mpmath precision."""
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


_bern_lock = threading.Lock()
_bern_cache: list[Fraction] = []
_at_row: list[Fraction] = []


def bernoulli(m: int) -> Fraction:
    """Seki-Bernoulli number B_m with x/(e^x - 1) = sum B_m x^m/m!, so B_1 = -1/2."""
    if m < 0:
        raise ValueError("m must be non-negative")
    with _bern_lock:
        # Akiyama-Tanigawa; the row is extended in place so the cache only grows.
        while len(_bern_cache) <= m:
            n = len(_bern_cache)
            _at_row.append(Fraction(1, n + 1))
            for j in range(n, 0, -1):
                _at_row[j - 1] = j * (_at_row[j - 1] - _at_row[j])
            _bern_cache.append(_at_row[0])
        b = _bern_cache[m]
    return -b if m == 1 else b


def pochhammer(s: int, k: int) -> int:
    """Rising factorial (s)_k = s (s+1) ... (s+k-1), with (s)_0 = 1."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = 1
    for i in range(k):
        out *= s + i
    return out


def binom(n: int, i: int) -> int:
    """Binomial coefficient, zero outside 0 <= i <= n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if i < 0 or i > n:
        return 0
    return comb(n, i)


_faul_cache: dict[tuple[int, bool], tuple[Fraction, ...]] = {}


def faulhaber(p: int, inclusive: bool = False) -> tuple[Fraction, ...]:
    """Coefficients c_j with sum_{m=1}^{n-1} m^p = sum_j c_j n^j.

    With ``inclusive`` the sum runs to n instead of n-1.
    """
    if p < 0:
        raise ValueError("p must be non-negative")
    key = (p, inclusive)
    hit = _faul_cache.get(key)
    if hit is not None:
        return hit
    # sum_{m=0}^{n-1} m^p = 1/(p+1) sum_j C(p+1, j) B_j n^{p+1-j}
    c = [Fraction(0)] * (p + 2)
    for j in range(p + 1):
        c[p + 1 - j] += Fraction(comb(p + 1, j)) * bernoulli(j) / (p + 1)
    if p == 0:
        c[0] -= 1  # the formula counts m = 0 via 0^0 = 1
    if inclusive:
        c[p] += 1
    out = tuple(c)
    _faul_cache[key] = out
    return out
