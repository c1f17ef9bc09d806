"""Finite combinations of (log t)^q Li_w(t) realizing Z(k; t).

A stored term (q, w) -> c stands for c * (-log t)^q / q! * Li_w(t). With this
convention the operator D = t d/dt acts on terms combinatorially:
D[(q, w)] = -(q - 1, w) + (q, w'), where w' lowers the last index by one.
"""
from __future__ import annotations

import re
from functools import lru_cache
from fractions import Fraction
from math import factorial
from types import MappingProxyType
from typing import Iterator, Mapping, Sequence

from .closedform import IntegrityError, coeff_a
from .numcore import binom, pochhammer

__all__ = [
    "LiCombination",
    "Z0",
    "Zq",
    "Zq_definition",
    "Zq_explicit",
    "Zfull",
    "licomb_D",
    "dr_bound",
    "format_licomb",
    "parse_licomb",
    "pochhammer_sum_identity",
    "lower_last",
]

Term = tuple[int, tuple[int, ...]]


class LiCombination:
    """Immutable map (q, w) -> c meaning sum c (-log t)^q / q! Li_w(t)."""

    __slots__ = ("r", "_terms")

    def __init__(self, r: int, terms: Mapping[Term, Fraction | int] | None = None):
        if r < 1:
            raise ValueError("depth must be at least 1")
        clean: dict[Term, Fraction] = {}
        for (q, w), c in (terms or {}).items():
            w = tuple(int(x) for x in w)
            if len(w) != r:
                raise ValueError(f"index {w} does not have depth {r}")
            if q < 0:
                raise ValueError("log power must be non-negative")
            c = Fraction(c)
            if c:
                clean[(int(q), w)] = c
        self.r = r
        self._terms = MappingProxyType(clean)

    @property
    def terms(self) -> Mapping[Term, Fraction]:
        return self._terms

    def __iter__(self) -> Iterator[tuple[Term, Fraction]]:
        return iter(sorted(self._terms.items()))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def max_q(self) -> int:
        return max((q for q, _ in self._terms), default=-1)

    def _merge(self, other: "LiCombination", sign: int) -> "LiCombination":
        if self.r != other.r:
            raise ValueError("depth mismatch")
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0) + sign * c
        return LiCombination(self.r, out)

    def __add__(self, other):
        return self._merge(other, 1)

    def __sub__(self, other):
        return self._merge(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, k) -> "LiCombination":
        k = Fraction(k)
        return LiCombination(self.r, {key: k * c for key, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LiCombination):
            return NotImplemented
        return self.r == other.r and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash((self.r, frozenset(self._terms.items())))

    def __repr__(self):
        return f"LiCombination({format_licomb(self)})"


def _vec(k: Sequence[int]) -> tuple[int, ...]:
    k = tuple(int(x) for x in k)
    if not k:
        raise ValueError("index vector must be non-empty")
    return k


def lower_last(k: Sequence[int], n: int = 1) -> tuple[int, ...]:
    """k^{(n)}: the last entry lowered by n (k' when n = 1)."""
    k = _vec(k)
    return k[:-1] + (k[-1] - n,)


def _assemble(k: tuple[int, ...], q: int) -> LiCombination:
    out: dict[Term, Fraction] = {}
    for (l, m), a in coeff_a(len(k), q).entries.items():
        c = a
        for kj, lj in zip(k, l):
            c *= pochhammer(kj, lj)
            if not c:
                break
        if c:
            w = tuple(x + y for x, y in zip(k, m))
            out[(0, w)] = out.get((0, w), 0) + c
    return LiCombination(len(k), out)


@lru_cache(maxsize=4096)
def _Z0(k: tuple[int, ...]) -> LiCombination:
    return _assemble(k, 0)


def Z0(k: Sequence[int]) -> LiCombination:
    """The q = 0 layer: sum a_{l,m} prod (k_j)_{l_j} Li_{k+m}."""
    return _Z0(_vec(k))


def _D_layer0(c: LiCombination, n: int) -> LiCombination:
    # D^n on a combination without log powers lowers the last index n times
    return LiCombination(c.r, {(0, lower_last(w, n)): v for (_, w), v in c.terms.items()})


def Zq_definition(k: Sequence[int], q: int) -> LiCombination:
    """sum_{i+j=q} (-1)^j C(q, i) D^i[Z_0(k^{(j)})], log prefactor excluded."""
    k = _vec(k)
    out = LiCombination(len(k))
    for j in range(q + 1):
        i = q - j
        term = _D_layer0(Z0(lower_last(k, j)), i).scale((-1) ** j * binom(q, i))
        out = out + term
    return out


def Zq_explicit(k: Sequence[int], q: int) -> LiCombination:
    """sum a_{l,m}(q) prod (k_j)_{l_j} Li_{k+m}, log prefactor excluded."""
    return _assemble(_vec(k), q)


@lru_cache(maxsize=4096)
def _Zq(k: tuple[int, ...], q: int) -> LiCombination:
    a = Zq_definition(k, q)
    b = Zq_explicit(k, q)
    if a != b:
        raise IntegrityError(f"Z_{q}{k}: definition and explicit formula disagree")
    return a


def Zq(k: Sequence[int], q: int) -> LiCombination:
    """Z_q(k) with both constructions compared; all returned terms carry q-label 0."""
    if q < 0:
        raise ValueError("q must be non-negative")
    return _Zq(_vec(k), int(q))


def dr_bound(r: int) -> int:
    """Largest exponent of u_r in G_r, which bounds the degree in k_r of the Z_0 coefficients."""
    return coeff_a(r, 0).max_last_degree()


@lru_cache(maxsize=4096)
def _Zfull(k: tuple[int, ...]) -> LiCombination:
    out: dict[Term, Fraction] = {}
    for q in range(dr_bound(len(k)) + 1):
        for (_, w), c in Zq(k, q).terms.items():
            out[(q, w)] = c
    return LiCombination(len(k), out)


def Zfull(k: Sequence[int]) -> LiCombination:
    """Z(k; t) = sum_q (-log t)^q / q! Z_q(k)."""
    return _Zfull(_vec(k))


def licomb_D(c: LiCombination) -> LiCombination:
    """D = t d/dt applied termwise."""
    out: dict[Term, Fraction] = {}
    for (q, w), v in c.terms.items():
        if q > 0:
            out[(q - 1, w)] = out.get((q - 1, w), 0) - v
        key = (q, lower_last(w))
        out[key] = out.get(key, 0) + v
    return LiCombination(c.r, out)


def pochhammer_sum_identity(l: int, q: int, s: int) -> tuple[int, int]:
    """Both sides of sum_{i+j=q} (-1)^j C(q,i) (s-j)_{l+q} = (l+1)_q (s)_l."""
    lhs = sum((-1) ** j * binom(q, q - j) * pochhammer(s - j, l + q) for j in range(q + 1))
    return lhs, pochhammer(l + 1, q) * pochhammer(s, l)


# ---------------------------------------------------------------- text form
#
# Grammar (whitespace between tokens is free):
#   combo := "0" | term (("+" | "-") term)*
#   term  := coeff " * logt^" q " * Li[" int ("," int)* "]"
#   coeff := ["-"] digits ["/" digits]
# The printed coefficient multiplies (log t)^q, so it equals c (-1)^q / q!
# for the stored coefficient c.

_TERM_RE = re.compile(
    r"\s*([+-])?\s*(\d+(?:/\d+)?)\s*\*\s*logt\^(\d+)\s*\*\s*Li\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]")


def format_licomb(c: LiCombination) -> str:
    parts: list[str] = []
    for (q, w), v in c:
        shown = v * (-1) ** q / factorial(q)
        body = f"{abs(shown)} * logt^{q} * Li[{','.join(map(str, w))}]"
        if not parts:
            parts.append(("-" if shown < 0 else "") + body)
        else:
            parts.append(("- " if shown < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def parse_licomb(text: str) -> LiCombination:
    s = text.strip()
    if s == "0":
        raise ValueError("the empty combination carries no depth; construct LiCombination(r) directly")
    pos = 0
    terms: dict[Term, Fraction] = {}
    r = None
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or (pos > 0 and m.group(1) is None):
            raise ValueError(f"cannot parse Li-combination near {s[pos:pos + 20]!r}")
        sign = -1 if m.group(1) == "-" else 1
        q = int(m.group(3))
        w = tuple(int(x) for x in m.group(4).split(","))
        if r is None:
            r = len(w)
        shown = sign * Fraction(m.group(2))
        key = (q, w)
        terms[key] = terms.get(key, 0) + shown * (-1) ** q * factorial(q)
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    return LiCombination(r, terms)
