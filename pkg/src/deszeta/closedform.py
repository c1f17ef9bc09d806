"""Exact values of desingularized multiple zeta values at non-positive integers.

Also builds the Laurent polynomial G_r and the integer coefficient tables
a^r_{l,m}(q) that parameterize the Li-combinations in :mod:`deszeta.licomb`.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from math import factorial
from typing import Sequence

from .numcore import bernoulli, pochhammer
from .series import MultiPoly, MultiSeries, TruncationError, expand_g, laurent_dz, \
    mv_substitute_sum, TruncatedLaurent

__all__ = [
    "IntegrityError",
    "CoeffTable",
    "gr_poly",
    "coeff_a",
    "deszeta_nonpos_bernoulli",
    "deszeta_nonpos_iterdiff",
    "genfun_check",
    "GenfunReport",
    "MAX_VALUE_DEPTH",
    "MAX_GENFUN_DEPTH",
]

MAX_VALUE_DEPTH = 6
MAX_GENFUN_DEPTH = 4


class IntegrityError(RuntimeError):
    """Two independent computations of the same object disagreed."""


def _names(r: int) -> tuple[str, ...]:
    return tuple(f"u{j}" for j in range(1, r + 1)) + tuple(f"v{j}" for j in range(1, r + 1))


_gr_cache: dict[int, MultiPoly] = {}


def gr_poly(r: int) -> MultiPoly:
    """prod_j {1 - (u_j v_j + ... + u_r v_r)(1/v_j - 1/v_{j-1})} with 1/v_0 = 0."""
    if r < 1:
        raise ValueError("depth must be at least 1")
    hit = _gr_cache.get(r)
    if hit is not None:
        return hit
    names = _names(r)
    out = MultiPoly.constant(names)
    for j in range(1, r + 1):
        s = MultiPoly(names)
        for i in range(j, r + 1):
            s = s + MultiPoly.var(names, f"u{i}") * MultiPoly.var(names, f"v{i}")
        diff = MultiPoly.var(names, f"v{j}", -1)
        if j > 1:
            diff = diff - MultiPoly.var(names, f"v{j - 1}", -1)
        out = out * (1 - s * diff)
    _gr_cache[r] = out
    return out


Key = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class CoeffTable:
    """Integers a^r_{l,m}(q) keyed by (l, m); every m sums to -q."""

    r: int
    q: int
    entries: dict[Key, int] = field(default_factory=dict)

    def __post_init__(self):
        for (l, m), c in self.entries.items():
            if len(l) != self.r or len(m) != self.r:
                raise ValueError("entry has the wrong depth")
            if sum(m) != -self.q:
                raise IntegrityError(f"entry m={m} violates |m| = -{self.q}")
            if min(l) < 0:
                raise IntegrityError(f"entry l={l} has a negative exponent")

    def __len__(self):
        return len(self.entries)

    def to_poly(self) -> MultiPoly:
        names = _names(self.r)
        return MultiPoly(names, {l + m: c for (l, m), c in self.entries.items()})

    def max_last_degree(self) -> int:
        return max((l[-1] for l, _ in self.entries), default=0)


def _table_from_poly(r: int, q: int, p: MultiPoly) -> CoeffTable:
    entries: dict[Key, int] = {}
    for e, c in p.terms.items():
        if c.denominator != 1:
            raise IntegrityError(f"non-integer coefficient {c}")
        entries[(e[:r], e[r:])] = int(c)
    return CoeffTable(r, q, entries)


def _apply_vinv_du(p: MultiPoly, r: int) -> MultiPoly:
    # v_r^{-1} d/du_r on every monomial
    iu, iv = r - 1, 2 * r - 1
    out: dict[tuple[int, ...], Fraction] = {}
    for e, c in p.terms.items():
        n = e[iu]
        if n == 0:
            continue
        e2 = list(e)
        e2[iu] -= 1
        e2[iv] -= 1
        k = tuple(e2)
        out[k] = out.get(k, 0) + n * c
    return MultiPoly(p.names, out)


_table_cache: dict[tuple[int, int], CoeffTable] = {}
_table_lock = threading.Lock()


def coeff_a(r: int, q: int = 0) -> CoeffTable:
    """The table a^r_{l,m}(q) of (v_r^{-1} d/du_r)^q G_r.

    Computed twice: by differentiating G_r symbolically, and by the shift
    a(q)_{l,m} = (l_r + 1)_q a_{l + q e_r, m + q e_r}. A mismatch raises.
    """
    if r < 1 or q < 0:
        raise ValueError("need r >= 1 and q >= 0")
    key = (r, q)
    with _table_lock:
        hit = _table_cache.get(key)
    if hit is not None:
        return hit
    p = gr_poly(r)
    for _ in range(q):
        p = _apply_vinv_du(p, r)
    direct = _table_from_poly(r, q, p)

    base = _table_from_poly(r, 0, gr_poly(r))
    shifted: dict[Key, int] = {}
    for (l, m), c in base.entries.items():
        if l[-1] < q:
            continue
        l2 = l[:-1] + (l[-1] - q,)
        m2 = m[:-1] + (m[-1] - q,)
        shifted[(l2, m2)] = pochhammer(l2[-1] + 1, q) * c
    if shifted != direct.entries:
        raise IntegrityError(f"coefficient tables disagree for r={r}, q={q}")
    with _table_lock:
        _table_cache[key] = direct
    return direct


def _check_nonpos(k: Sequence[int], max_depth: int) -> tuple[int, ...]:
    k = tuple(int(x) for x in k)
    if not k:
        raise ValueError("index vector must be non-empty")
    if any(x > 0 for x in k):
        raise ValueError(f"all entries must be non-positive, got {k}")
    if len(k) > max_depth:
        raise ValueError(f"depth {len(k)} exceeds configured maximum {max_depth}")
    return k


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first, *rest)


def deszeta_nonpos_bernoulli(k: Sequence[int], max_depth: int = MAX_VALUE_DEPTH) -> Fraction:
    """zeta^des_r(k) for k in Z_{<=0}^r via the multinomial sum over Seki-Bernoulli numbers."""
    k = _check_nonpos(k, max_depth)
    kk = [-x for x in k]
    r = len(kk)
    total = Fraction(0)
    # column i (0-based) of nu splits kk[i] into nu[0][i], ..., nu[i][i]
    for cols in cartesian(*(tuple(_compositions(kk[i], i + 1)) for i in range(r))):
        denom = 1
        term = Fraction(1)
        for i in range(r):
            row = 0
            for j in range(i, r):
                nu = cols[j][i]
                row += nu
                denom *= factorial(nu)
            term *= bernoulli(row + 1)
            if not term:
                break
        if term:
            total += term / denom
    for x in kk:
        total *= factorial(x)
    return -total if sum(kk) % 2 else total


def deszeta_nonpos_iterdiff(k: Sequence[int], margin: int = 0,
                            max_depth: int = MAX_VALUE_DEPTH) -> Fraction:
    """zeta^des_r(k) for k in Z_{<=0}^r as the constant term of nested d/dz and g(z) products."""
    k = _check_nonpos(k, max_depth)
    kk = [-x for x in k]
    order = sum(kk) + margin
    g = expand_g(order)
    s: TruncatedLaurent | None = None
    for n in kk:
        s = g if s is None else g * s
        for _ in range(n):
            s = laurent_dz(s)
    if s.order < 0:
        raise TruncationError(f"expansion order {order} too small", required_order=sum(kk))
    return s.constant_term()


@dataclass
class GenfunReport:
    ok: bool
    r: int
    order: int
    first_discrepancy: tuple[int, ...] | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None


def genfun_check(r: int, order: int, max_depth: int = MAX_GENFUN_DEPTH) -> GenfunReport:
    """Compare sum (-t)^k/k! zeta^des(-k) with prod_i h(t_i + ... + t_r), h(T) = g(-T)."""
    if r < 1 or r > max_depth:
        raise ValueError(f"depth must be in 1..{max_depth}")
    g = expand_g(order)
    h = TruncatedLaurent({n: (-1) ** n * c for n, c in g.coeffs.items()}, order)
    rhs = MultiSeries.one(r, order)
    for i in range(r):
        rhs = rhs * mv_substitute_sum(h, range(i, r), r, order)
    lhs_terms = {}
    for n in range(order + 1):
        for kk in _compositions(n, r):
            v = deszeta_nonpos_bernoulli(tuple(-x for x in kk))
            den = 1
            for x in kk:
                den *= factorial(x)
            lhs_terms[kk] = (-1) ** n * v / den
    lhs = MultiSeries(r, order, lhs_terms)
    diff = lhs.first_difference(rhs)
    if diff is None:
        return GenfunReport(True, r, order)
    return GenfunReport(False, r, order, diff, lhs.coefficient(diff), rhs.coefficient(diff))
