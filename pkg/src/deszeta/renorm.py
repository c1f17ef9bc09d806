"""Shuffle-type renormalization on words in d and y.

A Laurent series f determines a character phi on words by nested
differentiation. Its algebraic Birkhoff decomposition is computed with the
projection recursion over the reduced coproduct, and the renormalized values
F(k_1, ..., k_r) are the constant terms of phi_+ on reversed words.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .series import MultiSeries, TruncatedLaurent, TruncationError, expand_g, \
    laurent_dz, mv_substitute_sum
from .wordalg import EMPTY, Word, WordSum, dword, format_word, reduced_coproduct, \
    shuffle0_words

__all__ = [
    "CharacterSpec",
    "BirkhoffPair",
    "g_character",
    "renorm_word",
    "phi_eval",
    "phi_eval_sum",
    "birkhoff_decompose",
    "F_value",
    "check_F_generating",
    "GeneratingReport",
    "check_coproduct_identity",
    "check_F_recurrence",
]

# phi_- values are Laurent polynomials, known exactly; this order marks them as such
_EXACT = 1 << 30


@dataclass(frozen=True, eq=False)
class CharacterSpec:
    """The input series f (possibly with a pole part) and its truncation order."""

    f: TruncatedLaurent
    order: int | None = None
    _memo: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        if self.order is None:
            object.__setattr__(self, "order", self.f.order)
        if self.order > self.f.order:
            raise ValueError(f"order {self.order} exceeds the known order {self.f.order} of f")
        if self.order < self.f.order:
            object.__setattr__(self, "f", self.f.truncate(self.order))

    @property
    def regular(self) -> TruncatedLaurent:
        """f_{>=0}: the non-negative powers of f."""
        return self.f.regular_part()


def g_character(order: int, pole: Mapping[int, Fraction | int] | None = None,
                pole_cap: int = 32) -> CharacterSpec:
    """CharacterSpec for f = g(z) plus an optional pole part {exponent: coefficient}."""
    g = expand_g(order)
    coeffs = g.coeffs
    for e, c in (pole or {}).items():
        if e >= 0:
            raise ValueError("pole part must use negative exponents")
        coeffs[e] = coeffs.get(e, 0) + Fraction(c)
    return CharacterSpec(TruncatedLaurent(coeffs, order, pole_cap))


def renorm_word(k: Sequence[int]) -> Word:
    """The word d^{k_r} y ... d^{k_1} y whose phi_+ constant term is F(k_1, ..., k_r).

    All reversal bookkeeping between index vectors and words in this module goes
    through here.
    """
    k = tuple(int(x) for x in k)
    if any(x < 0 for x in k):
        raise ValueError(f"entries must be non-negative, got {k}")
    return dword(*reversed(k))


def _d_exponents(w: Word) -> tuple[int, ...]:
    if w.tail != 0:
        raise ValueError(f"word {format_word(w)} does not end in y")
    if any(e > 0 for e in w.exps):
        raise ValueError(f"word {format_word(w)} contains j")
    return tuple(-e for e in w.exps)


def _phi_raw(k: tuple[int, ...], f: TruncatedLaurent) -> TruncatedLaurent:
    s: TruncatedLaurent | None = None
    for n in reversed(k):
        s = f if s is None else f * s
        for _ in range(n):
            s = laurent_dz(s)
    return s


def _phi(w: Word, spec: CharacterSpec) -> TruncatedLaurent:
    k = _d_exponents(w)
    if not k:
        return TruncatedLaurent.one(_EXACT, spec.f.pole_cap)
    key = ("phi", k)
    hit = spec._memo.get(key)
    if hit is None:
        hit = _phi_raw(k, spec.f)
        with spec._lock:
            spec._memo[key] = hit
    return hit


def phi_eval(w: Word, spec: CharacterSpec) -> TruncatedLaurent:
    """phi(d^{k_1} y ... d^{k_r} y) = d^{k_1}[f d^{k_2}[f ... d^{k_r}[f]]].

    Raises TruncationError when the result is not known up to its constant term.
    """
    out = _phi(w, spec)
    if out.order < 0:
        raise TruncationError(f"phi({format_word(w)}) is known only to order {out.order}",
                              required_order=spec.order - out.order)
    return out


def phi_eval_sum(s: WordSum, spec: CharacterSpec) -> TruncatedLaurent:
    out: TruncatedLaurent | None = None
    for w, c in s:
        term = _phi(w, spec).scale(c)
        out = term if out is None else out + term
    if out is None:
        return TruncatedLaurent.zero(_EXACT, spec.f.pole_cap)
    return out


@dataclass
class BirkhoffPair:
    """phi_- (pure pole part) and phi_+ (power series part) on every word visited."""

    minus: dict[Word, TruncatedLaurent] = field(default_factory=dict)
    plus: dict[Word, TruncatedLaurent] = field(default_factory=dict)


def _bare(spec: CharacterSpec, w: Word) -> TruncatedLaurent:
    # phi(w) + sum phi_-(w') phi(w'')
    acc = _phi(w, spec)
    for (a, b), c in reduced_coproduct(w):
        m = _minus(spec, a)
        if m.is_zero():
            continue
        acc = acc + (m * _phi(b, spec)).scale(c)
    return acc


def _minus(spec: CharacterSpec, w: Word) -> TruncatedLaurent:
    key = ("minus", w)
    hit = spec._memo.get(key)
    if hit is not None:
        return hit
    bare = _bare(spec, w)
    if bare.order < -1:
        raise TruncationError(f"pole part of phi_-({format_word(w)}) is not determined",
                              required_order=spec.order - bare.order - 1)
    m = TruncatedLaurent({e: -c for e, c in bare.pole_part().coeffs.items()},
                         _EXACT, bare.pole_cap)
    with spec._lock:
        spec._memo[key] = m
        spec._memo[("plus", w)] = bare.regular_part()
    return m


def birkhoff_decompose(w: Word, spec: CharacterSpec) -> BirkhoffPair:
    """phi_-(w) = -pi(X), phi_+(w) = (Id - pi)(X) with X = phi(w) + sum phi_-(w') phi(w'')."""
    _d_exponents(w)
    pair = BirkhoffPair()
    pair.minus[EMPTY] = TruncatedLaurent.one(_EXACT, spec.f.pole_cap)
    pair.plus[EMPTY] = TruncatedLaurent.one(_EXACT, spec.f.pole_cap)
    if w.depth == 0:
        return pair
    _minus(spec, w)
    for key, val in list(spec._memo.items()):
        if key[0] == "minus":
            pair.minus[key[1]] = val
        elif key[0] == "plus":
            pair.plus[key[1]] = val
    return pair


def _plus(spec: CharacterSpec, w: Word) -> TruncatedLaurent:
    _minus(spec, w)
    return spec._memo[("plus", w)]


def F_value(k: Sequence[int], spec: CharacterSpec) -> Fraction:
    """F(k_1, ..., k_r): constant term of phi_+(d^{k_r} y ... d^{k_1} y)."""
    w = renorm_word(k)
    p = _plus(spec, w)
    if p.order < 0:
        raise TruncationError(f"F{tuple(k)} needs a longer expansion of f",
                              required_order=spec.order - p.order)
    return p.constant_term()


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first, *rest)


@dataclass
class GeneratingReport:
    ok: bool
    r: int
    order: int
    first_discrepancy: tuple[int, ...] | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None


def check_F_generating(r: int, spec: CharacterSpec, order: int) -> GeneratingReport:
    """Compare sum F(k) z^k/k! with f_{>=0}(z_r) f_{>=0}(z_{r-1}+z_r) ... f_{>=0}(z_1+...+z_r)."""
    if r < 1:
        raise ValueError("depth must be at least 1")
    reg = spec.regular
    if reg.order < order:
        raise TruncationError("f is not known far enough", required_order=order)
    reg = reg.truncate(order)
    rhs = MultiSeries.one(r, order)
    for i in range(r):
        rhs = rhs * mv_substitute_sum(reg, range(i, r), r, order)
    terms = {}
    for n in range(order + 1):
        for k in _compositions(n, r):
            den = 1
            for x in k:
                den *= factorial(x)
            terms[k] = F_value(k, spec) / den
    lhs = MultiSeries(r, order, terms)
    diff = lhs.first_difference(rhs)
    if diff is None:
        return GeneratingReport(True, r, order)
    return GeneratingReport(False, r, order, diff, lhs.coefficient(diff), rhs.coefficient(diff))


def check_coproduct_identity(w: Word, spec: CharacterSpec) -> bool:
    """phi applied to shuffle_0 of the reduced coproduct equals (2^dep - 2) phi(w)."""
    _d_exponents(w)
    total = WordSum()
    for (a, b), c in reduced_coproduct(w):
        total = total + shuffle0_words(a, b) * c
    lhs = phi_eval_sum(total, spec)
    rhs = _phi(w, spec).scale(2 ** w.depth - 2)
    return lhs.agrees_with(rhs)


def check_F_recurrence(k: Sequence[int], spec: CharacterSpec) -> bool:
    """F(k) = sum_{i+j=k_r} C(k_r, i) F(i) F(k_1, ..., k_{r-2}, k_{r-1}+j) for depth >= 2."""
    k = tuple(k)
    if len(k) < 2:
        raise ValueError("depth must be at least 2")
    kr = k[-1]
    total = Fraction(0)
    for i in range(kr + 1):
        j = kr - i
        total += factorial(kr) // (factorial(i) * factorial(j)) * \
            F_value((i,), spec) * F_value(k[:-2] + (k[-2] + j,), spec)
    return total == F_value(k, spec)
