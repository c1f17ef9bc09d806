"""Exact truncated Laurent series in one variable and multivariate series/polynomials.

A :class:`TruncatedLaurent` knows every coefficient up to and including
``order``; anything above is unknown. Products track how far the result is
still exact, so truncation never silently loses information.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

__all__ = [
    "PoleOrderError",
    "TruncationError",
    "TruncatedLaurent",
    "MultiPoly",
    "MultiSeries",
    "laurent_mul",
    "laurent_dz",
    "expand_g",
    "expand_exp",
    "mv_substitute_sum",
]

DEFAULT_POLE_CAP = 8


class PoleOrderError(ArithmeticError):
    """Raised when a pole deeper than the configured cap would be produced."""


class TruncationError(ArithmeticError):
    """Raised when a coefficient beyond the known order is requested."""

    def __init__(self, msg: str, required_order: int | None = None):
        super().__init__(msg)
        self.required_order = required_order


def _clean(coeffs: Mapping[int, Fraction], order: int) -> dict[int, Fraction]:
    return {e: Fraction(c) for e, c in coeffs.items() if c != 0 and e <= order}


class TruncatedLaurent:
    """sum_{n <= order} c_n z^n + O(z^(order+1)) with finitely many negative powers."""

    __slots__ = ("_c", "order", "pole_cap")

    def __init__(self, coeffs: Mapping[int, Fraction | int], order: int,
                 pole_cap: int = DEFAULT_POLE_CAP):
        c = _clean(coeffs, order)
        if c and -min(c) > pole_cap:
            raise PoleOrderError(f"pole of order {-min(c)} exceeds pole_cap={pole_cap}")
        self._c = c
        self.order = order
        self.pole_cap = pole_cap

    # construction helpers
    @classmethod
    def zero(cls, order: int, pole_cap: int = DEFAULT_POLE_CAP) -> "TruncatedLaurent":
        return cls({}, order, pole_cap)

    @classmethod
    def one(cls, order: int, pole_cap: int = DEFAULT_POLE_CAP) -> "TruncatedLaurent":
        return cls({0: 1}, order, pole_cap)

    @classmethod
    def monomial(cls, exp: int, coeff=1, order: int = 0,
                 pole_cap: int = DEFAULT_POLE_CAP) -> "TruncatedLaurent":
        return cls({exp: coeff}, max(order, exp), pole_cap)

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    @property
    def min_exp(self) -> int:
        """Smallest stored exponent (order + 1 for a series known to vanish)."""
        return min(self._c) if self._c else self.order + 1

    valuation = min_exp

    def __getitem__(self, exp: int) -> Fraction:
        if exp > self.order:
            raise TruncationError(
                f"coefficient of z^{exp} requested but series is only known to order {self.order}",
                required_order=exp)
        return self._c.get(exp, Fraction(0))

    def coefficient(self, exp: int) -> Fraction:
        return self[exp]

    def constant_term(self) -> Fraction:
        return self[0]

    def pole_part(self) -> "TruncatedLaurent":
        """The projection keeping only negative powers."""
        return TruncatedLaurent({e: c for e, c in self._c.items() if e < 0},
                                self.order, self.pole_cap)

    def regular_part(self) -> "TruncatedLaurent":
        return TruncatedLaurent({e: c for e, c in self._c.items() if e >= 0},
                                self.order, self.pole_cap)

    def truncate(self, order: int) -> "TruncatedLaurent":
        return TruncatedLaurent(self._c, min(order, self.order), self.pole_cap)

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other):
        if not isinstance(other, TruncatedLaurent):
            other = TruncatedLaurent({0: Fraction(other)}, self.order, self.pole_cap)
        order = min(self.order, other.order)
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = out.get(e, 0) + c
        return TruncatedLaurent(out, order, max(self.pole_cap, other.pole_cap))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedLaurent({e: -c for e, c in self._c.items()}, self.order, self.pole_cap)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "TruncatedLaurent":
        k = Fraction(k)
        return TruncatedLaurent({e: k * c for e, c in self._c.items()}, self.order, self.pole_cap)

    def __mul__(self, other):
        if isinstance(other, TruncatedLaurent):
            return laurent_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def dz(self) -> "TruncatedLaurent":
        return laurent_dz(self)

    def __eq__(self, other):
        if not isinstance(other, TruncatedLaurent):
            return NotImplemented
        return self.order == other.order and self._c == other._c

    def agrees_with(self, other: "TruncatedLaurent") -> bool:
        """Equality on the common range of known coefficients."""
        n = min(self.order, other.order)
        keys = {e for e in (*self._c, *other._c) if e <= n}
        return all(self._c.get(e, 0) == other._c.get(e, 0) for e in keys)

    def __hash__(self):
        return hash((self.order, frozenset(self._c.items())))

    def __repr__(self):
        if not self._c:
            return f"O(z^{self.order + 1})"
        parts = [f"({c})*z^{e}" for e, c in sorted(self._c.items())]
        return " + ".join(parts) + f" + O(z^{self.order + 1})"


def laurent_mul(a: TruncatedLaurent, b: TruncatedLaurent) -> TruncatedLaurent:
    """Exact product; the result is known as far as both truncations allow."""
    va, vb = a.min_exp, b.min_exp
    order = min(a.order, b.order, a.order + vb, b.order + va)
    cap = max(a.pole_cap, b.pole_cap)
    if a._c and b._c and -(va + vb) > cap:
        raise PoleOrderError(f"product has pole of order {-(va + vb)} > pole_cap={cap}")
    out: dict[int, Fraction] = {}
    for ea, ca in a._c.items():
        for eb, cb in b._c.items():
            e = ea + eb
            if e <= order:
                out[e] = out.get(e, 0) + ca * cb
    return TruncatedLaurent(out, order, cap)


def laurent_dz(a: TruncatedLaurent) -> TruncatedLaurent:
    """Termwise d/dz; the known order drops by one."""
    return TruncatedLaurent({e - 1: e * c for e, c in a._c.items() if e != 0},
                            a.order - 1, a.pole_cap)


def expand_exp(order: int, scale: int = 1) -> TruncatedLaurent:
    """exp(scale*z) to the given order."""
    return TruncatedLaurent({n: Fraction(scale ** n, factorial(n)) for n in range(order + 1)}, order)


def _power_series_inverse(c: Sequence[Fraction], order: int) -> list[Fraction]:
    if c[0] == 0:
        raise ZeroDivisionError("power series with zero constant term is not invertible")
    inv = [Fraction(0)] * (order + 1)
    inv[0] = 1 / Fraction(c[0])
    for n in range(1, order + 1):
        s = sum(c[k] * inv[n - k] for k in range(1, min(n, len(c) - 1) + 1))
        inv[n] = -s * inv[0]
    return inv


_g_cache: dict[int, TruncatedLaurent] = {}


def expand_g(order: int) -> TruncatedLaurent:
    """Taylor series of e^z ((1+z) - e^z) / (e^z - 1)^2 to the given order.

    Both numerator and denominator vanish to second order at 0; the common
    z^2 is divided out before the series division.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    hit = _g_cache.get(order)
    if hit is not None:
        return hit
    m = order + 2
    e = [Fraction(1, factorial(n)) for n in range(m + 1)]
    inner = [Fraction(0)] * (m + 1)  # (1 + z) - e^z
    for n in range(2, m + 1):
        inner[n] = -e[n]
    num = [sum(e[k] * inner[n - k] for k in range(n + 1)) for n in range(m + 1)]
    em1 = [Fraction(0)] + e[1:]  # e^z - 1
    den = [sum(em1[k] * em1[n - k] for k in range(n + 1)) for n in range(m + 1)]
    num_r, den_r = num[2:], den[2:]
    inv = _power_series_inverse(den_r, order)
    coeffs = {n: sum(num_r[k] * inv[n - k] for k in range(n + 1)) for n in range(order + 1)}
    out = TruncatedLaurent(coeffs, order)
    _g_cache[order] = out
    return out


Exps = tuple[int, ...]


class MultiPoly:
    """Exact Laurent polynomial; monomials are integer exponent tuples over ``names``."""

    __slots__ = ("names", "terms")

    def __init__(self, names: Sequence[str], terms: Mapping[Exps, Fraction | int] | None = None):
        self.names = tuple(names)
        self.terms: dict[Exps, Fraction] = {
            tuple(k): Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def constant(cls, names, c=1) -> "MultiPoly":
        return cls(names, {(0,) * len(names): c})

    @classmethod
    def var(cls, names, name: str, power: int = 1, coeff=1) -> "MultiPoly":
        e = [0] * len(names)
        e[list(names).index(name)] = power
        return cls(names, {tuple(e): coeff})

    def _check(self, other: "MultiPoly"):
        if self.names != other.names:
            raise ValueError("variable sets differ")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.names, other)
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return MultiPoly(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.names, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            return MultiPoly(self.names, {k: c * v for k, v in self.terms.items()})
        self._check(other)
        out: dict[Exps, Fraction] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return MultiPoly(self.names, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.names == other.names and self.terms == other.terms

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, v in sorted(self.terms.items()):
            mono = "*".join(f"{n}^{e}" for n, e in zip(self.names, k) if e)
            parts.append(f"({v})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


class MultiSeries:
    """Truncated power series in ``nvars`` variables, exact to total degree ``total_order``."""

    __slots__ = ("nvars", "total_order", "terms")

    def __init__(self, nvars: int, total_order: int,
                 terms: Mapping[Exps, Fraction | int] | None = None):
        self.nvars = nvars
        self.total_order = total_order
        t = {}
        for k, v in (terms or {}).items():
            k = tuple(k)
            if len(k) != nvars or min(k, default=0) < 0:
                raise ValueError(f"bad exponent vector {k}")
            if v != 0 and sum(k) <= total_order:
                t[k] = Fraction(v)
        self.terms: dict[Exps, Fraction] = t

    @classmethod
    def one(cls, nvars: int, total_order: int) -> "MultiSeries":
        return cls(nvars, total_order, {(0,) * nvars: 1})

    def coefficient(self, exps: Iterable[int]) -> Fraction:
        exps = tuple(exps)
        if sum(exps) > self.total_order:
            raise TruncationError(f"total degree {sum(exps)} beyond order {self.total_order}")
        return self.terms.get(exps, Fraction(0))

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return MultiSeries(self.nvars, min(self.total_order, other.total_order), out)

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            c = Fraction(other)
            return MultiSeries(self.nvars, self.total_order, {k: c * v for k, v in self.terms.items()})
        if other.nvars != self.nvars:
            raise ValueError("variable counts differ")
        n = min(self.total_order, other.total_order)
        out: dict[Exps, Fraction] = {}
        for ka, va in self.terms.items():
            da = sum(ka)
            for kb, vb in other.terms.items():
                if da + sum(kb) > n:
                    continue
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return MultiSeries(self.nvars, n, out)

    __rmul__ = __mul__

    def first_difference(self, other: "MultiSeries") -> Exps | None:
        """Smallest exponent vector where the two disagree, or None."""
        n = min(self.total_order, other.total_order)
        keys = sorted({k for k in (*self.terms, *other.terms) if sum(k) <= n},
                      key=lambda k: (sum(k), k))
        for k in keys:
            if self.terms.get(k, 0) != other.terms.get(k, 0):
                return k
        return None

    def __eq__(self, other):
        return (isinstance(other, MultiSeries) and self.nvars == other.nvars
                and self.total_order == other.total_order and self.terms == other.terms)

    def __repr__(self):
        return f"MultiSeries(nvars={self.nvars}, order={self.total_order}, terms={len(self.terms)})"


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first, *rest)


def mv_substitute_sum(f: TruncatedLaurent, variables: Sequence[int], nvars: int,
                      total_order: int) -> MultiSeries:
    """f(z_{i1} + ... + z_{ik}) expanded multinomially up to total degree ``total_order``.

    ``variables`` are 0-based positions among ``nvars`` variables.
    """
    if f.min_exp < 0 and not f.is_zero():
        raise ValueError("cannot substitute a sum of variables into a pole")
    if f.order < total_order:
        raise TruncationError(
            f"series known to order {f.order}, need {total_order}", required_order=total_order)
    variables = list(variables)
    if not variables or len(set(variables)) != len(variables):
        raise ValueError("variables must be a non-empty set of positions")
    out: dict[Exps, Fraction] = {}
    for n in range(total_order + 1):
        c = f[n]
        if c == 0:
            continue
        for comp in _compositions(n, len(variables)):
            mult = factorial(n)
            for p in comp:
                mult //= factorial(p)
            e = [0] * nvars
            for pos, p in zip(variables, comp):
                e[pos] = p
            k = tuple(e)
            out[k] = out.get(k, 0) + c * mult
    return MultiSeries(nvars, total_order, out)
