"""Words over {d, j, y} with dj = jd = 1, the product shuffle_0 and the reduced coproduct.

A word j^{e_0} y j^{e_1} y ... j^{e_{r-1}} y j^{tail} is stored as the exponent
tuple ``(e_0, ..., e_{r-1})`` plus ``tail``; a negative exponent is a power of d.
Words with a nonzero tail span the ideal T and are dropped whenever a product
or normalization produces them, so every WordSum holds tail-0 words only.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Iterator, Mapping

from .numcore import binom

__all__ = [
    "Word",
    "WordSum",
    "TensorSum",
    "FuelExhausted",
    "word_normalize",
    "shuffle0",
    "shuffle0_words",
    "closed_shuffle_depth11",
    "closed_shuffle_depth21",
    "reduced_coproduct",
    "word_to_index",
    "index_to_word",
    "parse_word",
    "format_word",
    "dword",
]

FUEL_LIMIT = 10 ** 6


class FuelExhausted(RuntimeError):
    """The shuffle recursion used more steps than allowed."""


@dataclass(frozen=True, slots=True)
class Word:
    exps: tuple[int, ...] = ()
    tail: int = 0

    def __post_init__(self):
        object.__setattr__(self, "exps", tuple(int(e) for e in self.exps))

    @property
    def depth(self) -> int:
        return len(self.exps)

    def is_unit(self) -> bool:
        return not self.exps and self.tail == 0

    def letters(self) -> str:
        out = []
        for e in (*self.exps, None):
            if e is None:
                e = self.tail
            out.append(("j" if e > 0 else "d") * abs(e))
            out.append("y")
        return "".join(out[:-1])

    def __str__(self):
        s = format_word(self)
        return s if self.tail == 0 else f"{s}j^{self.tail}"


EMPTY = Word()


def dword(*dexps: int) -> Word:
    """The word d^{k_1} y ... d^{k_r} y."""
    return Word(tuple(-k for k in dexps))


class WordSum:
    """Finite rational combination of tail-0 words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Fraction | int] | None = None):
        t: dict[Word, Fraction] = {}
        for w, c in (terms or {}).items():
            if w.tail != 0:
                continue
            c = Fraction(c)
            if c:
                t[w] = t.get(w, 0) + c
        self.terms = {w: c for w, c in t.items() if c}

    @classmethod
    def of(cls, w: Word, c=1) -> "WordSum":
        return cls({w: c})

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda wc: (wc[0].depth, wc[0].exps)))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "WordSum") -> "WordSum":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return WordSum(out)

    def __neg__(self):
        return WordSum({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = Fraction(k)
        return WordSum({w: k * c for w, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, WordSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"WordSum({format_wordsum(self)})"

    def __str__(self):
        return format_wordsum(self)


class TensorSum:
    """Finite rational combination of pairs of tail-0 words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[Word, Word], Fraction | int] | None = None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kc: (kc[0][0].exps, kc[0][1].exps)))

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, TensorSum) and self.terms == other.terms

    def __repr__(self):
        inner = ", ".join(f"{c}*({format_word(a)} x {format_word(b)})" for (a, b), c in self)
        return f"TensorSum({inner})"


# ---------------------------------------------------------------- literals

_WORD_RE = re.compile(r"^\s*\[\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\]\s*$")


def parse_word(text: str) -> Word:
    """Parse "[e1,...,er]" meaning j^{e1} y ... j^{er} y."""
    m = _WORD_RE.match(text)
    if not m:
        raise ValueError(f"not a word literal: {text!r}")
    body = m.group(1)
    return Word(tuple(int(x) for x in body.split(","))) if body else EMPTY


def format_word(w: Word) -> str:
    return "[" + ",".join(str(e) for e in w.exps) + "]"


def format_wordsum(s: WordSum) -> str:
    if not s.terms:
        return "0"
    out = []
    for i, (w, c) in enumerate(sorted(s.terms.items(), key=lambda wc: wc[0].exps)):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = format_word(w) if a == 1 else f"{a}*{format_word(w)}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def word_to_index(w: Word) -> tuple[int, ...]:
    """Index vector attached to a word: its exponent sequence read backwards."""
    if w.tail != 0:
        raise ValueError(f"word {w} has nonzero trailing exponent; it lies in T")
    return tuple(reversed(w.exps))


def index_to_word(k: Iterable[int]) -> Word:
    return Word(tuple(reversed(tuple(k))))


# ---------------------------------------------------------------- normalization

def word_normalize(raw: str | Iterable[str]) -> WordSum:
    """Collapse d/j runs of a letter string into a canonical word (zero if it ends in j or d)."""
    exps: list[int] = []
    run = 0
    for ch in raw:
        if ch in " \t,":
            continue
        if ch == "j":
            run += 1
        elif ch == "d":
            run -= 1
        elif ch == "y":
            exps.append(run)
            run = 0
        else:
            raise ValueError(f"unknown letter {ch!r}")
    if run != 0:
        return WordSum()
    return WordSum.of(Word(tuple(exps)))


# ---------------------------------------------------------------- shuffle_0

Exps = tuple[int, ...]
_Terms = dict[Exps, Fraction]

_cache: dict[tuple[Exps, Exps], tuple[tuple[Exps, Fraction], ...]] = {}
_cache_lock = threading.Lock()


class _Fuel:
    __slots__ = ("left", "limit")

    def __init__(self, n: int):
        self.left = self.limit = n

    def burn(self):
        self.left -= 1
        if self.left < 0:
            raise FuelExhausted(f"shuffle_0 recursion exceeded {self.limit} steps")


def _pre_y(terms: _Terms) -> _Terms:
    return {(0,) + w: c for w, c in terms.items()}


def _pre_shift(terms: _Terms, delta: int) -> _Terms:
    # j (delta=+1) or d (delta=-1) in front; on the empty word the result lies in T
    return {(w[0] + delta,) + w[1:]: c for w, c in terms.items() if w}


def _acc(out: _Terms, terms: _Terms, sign: int = 1):
    for w, c in terms.items():
        v = out.get(w, 0) + sign * c
        if v:
            out[w] = v
        else:
            out.pop(w, None)


def _sh(u: Exps, v: Exps, fuel: _Fuel) -> _Terms:
    if not u:
        return {v: Fraction(1)}
    if not v:
        return {u: Fraction(1)}
    key = (u, v)
    hit = _cache.get(key)
    if hit is not None:
        return dict(hit)
    fuel.burn()
    a, b = u[0], v[0]
    if a == 0:
        res = _pre_y(_sh(u[1:], v, fuel))
    elif b == 0:
        res = _pre_y(_sh(u, v[1:], fuel))
    else:
        # strip the leading letter; for j/d runs the rest keeps the shortened exponent
        ur = (a - 1,) + u[1:] if a > 0 else (a + 1,) + u[1:]
        vr = (b - 1,) + v[1:] if b > 0 else (b + 1,) + v[1:]
        res = {}
        if a > 0 and b > 0:    # ju sh jv = j(u sh jv) + j(ju sh v)
            _acc(res, _pre_shift(_sh(ur, v, fuel), +1))
            _acc(res, _pre_shift(_sh(u, vr, fuel), +1))
        elif a < 0 and b < 0:  # du sh dv = d(u sh dv) - u sh d^2 v
            _acc(res, _pre_shift(_sh(ur, v, fuel), -1))
            _acc(res, _sh(ur, (b - 1,) + v[1:], fuel), -1)
        elif a < 0:            # du sh jv = d(u sh jv) - u sh v
            _acc(res, _pre_shift(_sh(ur, v, fuel), -1))
            _acc(res, _sh(ur, vr, fuel), -1)
        else:                  # ju sh dv = d(ju sh v) - u sh v
            _acc(res, _pre_shift(_sh(u, vr, fuel), -1))
            _acc(res, _sh(ur, vr, fuel), -1)
    with _cache_lock:
        _cache[key] = tuple(res.items())
    return res


def shuffle0_words(u: Word, v: Word, fuel: int = FUEL_LIMIT) -> WordSum:
    if u.tail or v.tail:
        return WordSum()
    res = _sh(u.exps, v.exps, _Fuel(fuel))
    return WordSum({Word(w): c for w, c in res.items()})


def shuffle0(u: WordSum | Word, v: WordSum | Word, fuel: int = FUEL_LIMIT) -> WordSum:
    """Bilinear extension of the shuffle_0 recursion, reduced modulo T."""
    if isinstance(u, Word):
        u = WordSum.of(u)
    if isinstance(v, Word):
        v = WordSum.of(v)
    tank = _Fuel(fuel)
    out: _Terms = {}
    for wu, cu in u.terms.items():
        for wv, cv in v.terms.items():
            for w, c in _sh(wu.exps, wv.exps, tank).items():
                out[w] = out.get(w, 0) + cu * cv * c
    return WordSum({Word(w): c for w, c in out.items()})


# ---------------------------------------------------------------- closed forms

def closed_shuffle_depth11(k: int, l: int) -> WordSum:
    """Closed expansion of d^k y sh_0 j^l y."""
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    out: dict[Word, Fraction] = {}

    def add(w, c):
        out[w] = out.get(w, 0) + c

    for i in range(min(k, l - 1) + 1):
        add(Word((-(k - i), l - i)), (-1) ** i * binom(k, i))
    for i in range(k - l + 1):
        add(Word((-(k - l - i), -i)), (-1) ** l * binom(k - 1 - i, l - 1))
    return WordSum(out)


def closed_shuffle_depth21(k: int, l: int, m: int, literal: bool = False) -> WordSum:
    """Closed expansion of d^k y j^l y sh_0 j^m y.

    The outer index of the first double sum runs over 0..k. With ``literal=True``
    it stops at min(k, l - 1) instead; the dropped terms vanish when m <= l but
    not when m > l, so the literal form differs from the recursion there.
    """
    if k < 1 or l < 1 or m < 1:
        raise ValueError("k, l and m must be positive")
    out: dict[Word, Fraction] = {}

    def add(w, c):
        out[w] = out.get(w, 0) + c

    top = min(k, l - 1) if literal else k
    for i in range(top + 1):
        for p in range(1, l + m - i):
            c = (-1) ** i * binom(k, i) * (binom(p - 1, l - 1) + binom(p - 1, m - i - 1))
            add(Word((-(k - i), p, l + m - i - p)), c)
    for i in range(k - m + 1):
        add(Word((-i, -(k - m - i), l)), (-1) ** m * binom(m - 1 + i, m - 1))
    return WordSum(out)



# ---------------------------------------------------------------- coproduct

def _split_word(left: list[str], right: list[str]) -> tuple[Word, Word] | None:
    a = word_normalize(left)
    b = word_normalize(right)
    if not a or not b:
        return None
    (wa, _), = a.terms.items()
    (wb, _), = b.terms.items()
    return wa, wb


def reduced_coproduct(w: Word) -> TensorSum:
    """Reduced coproduct of a word d^{k_1} y ... d^{k_r} y (no j letters allowed)."""
    if w.tail != 0:
        raise ValueError("word must end in y")
    if any(e > 0 for e in w.exps):
        raise ValueError(f"word {format_word(w)} contains j; the coproduct is defined on d/y words only")
    k = [-e for e in w.exps]
    r = len(k)
    out: dict[tuple[Word, Word], Fraction] = {}

    def add_sym(a: Word, b: Word, c: int):
        out[(a, b)] = out.get((a, b), 0) + c
        out[(b, a)] = out.get((b, a), 0) + c

    def dy_tail(start: int) -> list[str]:
        return [ch for kk in k[start:] for ch in "d" * kk + "y"]

    if r < 2:
        return TensorSum()
    for i in range(k[0] + 1):
        j = k[0] - i
        left = ["d"] * i + ["y"]
        right = ["d"] * j + dy_tail(1)
        add_sym(*_split_word(left, right), binom(k[0], i))
    for p in range(2, r):
        for split in cartesian(*(range(k[l] + 1) for l in range(p))):
            coeff = 1
            for l in range(p):
                coeff *= binom(k[l], split[l])
            for choice in cartesian((0, 1), repeat=p - 1):
                left: list[str] = []
                right: list[str] = []
                for q in range(p - 1):
                    iq, jq = split[q], k[q] - split[q]
                    if choice[q] == 0:   # (u_q, v_q) = (d^{i_q}, d^{j_q} y)
                        left += ["d"] * iq
                        right += ["d"] * jq + ["y"]
                    else:                # (u_q, v_q) = (d^{j_q} y, d^{i_q})
                        left += ["d"] * jq + ["y"]
                        right += ["d"] * iq
                ip, jp = split[p - 1], k[p - 1] - split[p - 1]
                left += ["d"] * ip + ["y"]
                right += ["d"] * jp + dy_tail(p)
                pair = _split_word(left, right)
                if pair is not None:
                    add_sym(*pair, coeff)
    return TensorSum(out)
