"""High-precision evaluation of multiple polylogarithms, MZVs and zeta^des.

Multiple polylogarithms Li_w(t) with non-positive entries are reduced exactly
to lower depth before anything is summed:

* a trailing entry -b uses Li_{w,-b} = sum_i C(b,i) Li_{-(b-i)} Li_{w^{(i)}};
* a leading entry -a replaces the innermost sum by its Faulhaber polynomial;
* an interior entry -a becomes a difference of two Faulhaber polynomials.

Depth-one values come from closed forms (non-positive index) or mpmath's
polylog. Depth-two values with positive entries use an Euler-Maclaurin tail
for the inner harmonic sum, which stays cheap as t approaches 1. Anything
else falls back to nested series.

zeta^des at a point outside the non-positive octant is obtained either from
the limit t -> 1 of Z(k; t) (route A) or from the finite MZV combination
when every shifted MZV it needs converges (route B).
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Sequence

import mpmath

from .closedform import coeff_a, deszeta_nonpos_bernoulli
from .licomb import LiCombination, Zfull, lower_last
from .numcore import PrecisionCtx, bernoulli, binom, faulhaber, pochhammer, to_bigfloat

__all__ = [
    "Route",
    "EvalResult",
    "NonConvergenceError",
    "DomainError",
    "OracleUnavailable",
    "li_eval",
    "licomb_eval",
    "mzv_eval",
    "in_domain",
    "deszeta_eval",
    "route_b_applicable",
    "deszeta_trailing_reduction",
    "desli_quadrature_oracle",
    "lemma_limit_check",
    "extrapolate",
    "Extrapolation",
]

log = logging.getLogger(__name__)


class Route(str, enum.Enum):
    SERIES = "series"
    REDUCTION = "reduction"
    EXTRAPOLATION_A = "extrapolation-A"
    COMBINATION_B = "combination-B"
    QUADRATURE = "quadrature-oracle"
    EXACT = "exact"
    TRAILING = "trailing-reduction"


@dataclass(frozen=True)
class EvalResult:
    value: mpmath.mpf
    err_bound: mpmath.mpf
    route: Route
    rigorous: bool = False
    exact: Fraction | None = None
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.err_bound < 0:
            raise ValueError("error bound must be non-negative")

    def __float__(self):
        return float(self.value)


class NonConvergenceError(ArithmeticError):
    def __init__(self, msg: str, diagnostics: dict | None = None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class DomainError(ValueError):
    """Index vector outside the region of absolute convergence."""


class OracleUnavailable(RuntimeError):
    """The independent oracle could not produce a trustworthy value."""


# ---------------------------------------------------------------- helpers

def _mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return to_bigfloat(x)
    if isinstance(x, str):
        return mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator
    return mpmath.mpf(x)


def _ulp_err(x) -> mpmath.mpf:
    return abs(x) * mpmath.mpf(2) ** (-mpmath.mp.prec + 8)


def _result(ctx: PrecisionCtx, v, e, route: "Route", *args, **kw) -> "EvalResult":
    # round once, at the caller's working precision, and account for that rounding
    with ctx.workprec():
        out = +v
        return EvalResult(out, e + abs(out - v) + _ulp_err(out) / 256, route, *args, **kw)


def _check_t(t) -> mpmath.mpf:
    t = _mpf(t)
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    return t


def _vec(k: Sequence[int]) -> tuple[int, ...]:
    k = tuple(int(x) for x in k)
    if not k:
        raise ValueError("index vector must be non-empty")
    return k


@lru_cache(maxsize=None)
def _eulerian_numerator(n: int) -> tuple[int, ...]:
    """Coefficients of P_n with Li_{-n}(t) = P_n(t) / (1 - t)^{n+1}."""
    if n == 0:
        return (0, 1)
    # P_n = t (P_{n-1}' (1 - t) + n P_{n-1})
    p = _eulerian_numerator(n - 1)
    inner = [0] * (len(p) + 1)
    for i in range(1, len(p)):
        inner[i - 1] += i * p[i]
        inner[i] -= i * p[i]
    for i, c in enumerate(p):
        inner[i] += n * c
    out = [0] + inner
    while out[-1] == 0:
        out.pop()
    return tuple(out)


# ---------------------------------------------------------------- Li engine

class _LiEngine:
    """Evaluates Li_w(t) at one t and precision, with a value cache."""

    SERIES_LIMIT = 3_000

    def __init__(self, t: mpmath.mpf, ctx: PrecisionCtx, method: str = "auto"):
        self.t = t
        self.h = 1 - t
        self.ctx = ctx
        self.method = method
        self.cache: dict[tuple[int, ...], tuple[mpmath.mpf, mpmath.mpf]] = {}
        self.series_used = False
        self.tails: dict = {}
        self.log1mt = mpmath.log(self.h)

    def li(self, w: tuple[int, ...]) -> tuple[mpmath.mpf, mpmath.mpf]:
        hit = self.cache.get(w)
        if hit is None:
            hit = self._compute(w)
            self.cache[w] = hit
        return hit

    def _compute(self, w):
        if self.method == "series":
            return self._series(w)
        r = len(w)
        if r == 1:
            return self._depth1(w[0])
        if w[0] <= 0:
            return self._leading(w)
        if w[-1] <= 0:
            return self._trailing(w)
        for i in range(1, r - 1):
            if w[i] <= 0:
                return self._middle(w, i)
        if r == 2:
            return self._positive2(*w)
        return self._series(w)

    def _depth1(self, k: int):
        t = self.t
        if k <= 0:
            p = _eulerian_numerator(-k)
            num = mpmath.polyval(list(reversed(p)), t)
            v = num / self.h ** (1 - k)
            return v, _ulp_err(v)
        if k == 1:
            v = -self.log1mt
        else:
            v = mpmath.polylog(k, t)
        return v, _ulp_err(v)

    def _combine(self, parts):
        v = mpmath.mpf(0)
        e = mpmath.mpf(0)
        for c, (x, ex) in parts:
            v += c * x
            e += abs(c) * ex
        return v, e + _ulp_err(v)

    def _leading(self, w):
        a = -w[0]
        c = faulhaber(a)
        parts = []
        for j, cj in enumerate(c):
            if cj:
                parts.append((to_bigfloat(cj), self.li((w[1] - j,) + w[2:])))
        return self._combine(parts)

    def _middle(self, w, i):
        a = -w[i]
        c = faulhaber(a)
        ci = faulhaber(a, inclusive=True)
        parts = []
        for j, cj in enumerate(c):
            if cj:
                parts.append((to_bigfloat(cj), self.li(w[:i] + (w[i + 1] - j,) + w[i + 2:])))
        for j, cj in enumerate(ci):
            if cj:
                parts.append((-to_bigfloat(cj), self.li(w[:i - 1] + (w[i - 1] - j,) + w[i + 1:])))
        return self._combine(parts)

    def _trailing(self, w):
        b = -w[-1]
        head = w[:-1]
        v = mpmath.mpf(0)
        e = mpmath.mpf(0)
        for i in range(b + 1):
            x, ex = self.li((-(b - i),))
            y, ey = self.li(lower_last(head, i))
            c = binom(b, i)
            v += c * x * y
            e += c * (abs(x) * ey + abs(y) * ex + ex * ey)
        return v, e + _ulp_err(v)

    def _positive2(self, a: int, b: int):
        if self.method == "auto" and self._series_terms((a, b)) <= self.SERIES_LIMIT:
            return self._series((a, b))
        if a == 1:
            # shuffle of iterated integrals: Li_1 Li_b = 2 Li_{1,b} + sum_{p=1}^{b-1} Li_{p+1,b-p}
            x, ex = self.li((1,))
            y, ey = self.li((b,))
            v = x * y
            e = abs(x) * ey + abs(y) * ex
            for p in range(1, b):
                z, ez = self.li((p + 1, b - p))
                v -= z
                e += ez
            return v / 2, e / 2 + _ulp_err(v)
        return _harmonic_weighted(a, b, self.t, self.li, self.tails)

    def _series_terms(self, w) -> int:
        bits = mpmath.mp.prec
        return int(bits * 0.7 / float(-mpmath.log(self.t))) + 10

    def _series(self, w):
        self.series_used = True
        return _li_series(w, self.t, self.ctx)


def _li_series(w: tuple[int, ...], t: mpmath.mpf, ctx: PrecisionCtx):
    """Nested summation with cumulative inner sums P_i(n)."""
    r = len(w)
    prefix = [mpmath.mpf(1)] + [mpmath.mpf(0)] * (r - 1)
    total = mpmath.mpf(0)
    tn = mpmath.mpf(1)
    tol = mpmath.mpf(ctx.tail_tol)
    # growth degree of the inner sums; k <= 1 entries add at most 1 - k each
    degree = sum(max(1 - k, 0) for k in w[:-1]) + max(-w[-1], 0) + (r - 1)
    n = 0
    last = mpmath.mpf(0)
    while True:
        n += 1
        if n > ctx.max_terms:
            raise NonConvergenceError(
                f"Li{list(w)}({mpmath.nstr(t, 8)}) needs more than {ctx.max_terms} terms",
                {"terms": n - 1, "partial_sum": total, "last_term": last})
        tn *= t
        nn = mpmath.mpf(n)
        last = tn * prefix[r - 1] / nn ** w[-1]
        total += last
        for i in range(r - 1, 0, -1):
            prefix[i] += prefix[i - 1] / nn ** w[i - 1]
        if n > 4 * (degree + 1) and last != 0:
            q = t * mpmath.exp(mpmath.mpf(degree) / n)
            if q < 1:
                tail = abs(last) * q / (1 - q)
                if tail < tol:
                    return total, tail + _ulp_err(total)


def _em_terms(a, n0: int, bits: int):
    """Coefficients e_j and exponents p_j with zeta(a, n) ~ sum e_j n^{-p_j} for n >= n0."""
    out = [(1 / (a - 1), a - 1), (mpmath.mpf(1) / 2, a)]
    j = 1
    tiny = mpmath.mpf(2) ** (-bits - 10)
    while True:
        poch = mpmath.rf(a, 2 * j - 1)
        c = to_bigfloat(bernoulli(2 * j)) / factorial(2 * j) * poch
        if c == 0:
            # a is a non-positive integer: the expansion is a finite polynomial
            return out, mpmath.mpf(0)
        size = abs(c) * mpmath.mpf(n0) ** (-(a + 2 * j - 1))
        if size < tiny and j > 1:
            return out, 2 * size
        out.append((c, a + 2 * j - 1))
        j += 1
        if j > 4 * bits:
            return out, 2 * size


def _harmonic_weighted(a, b, t, li: Callable | None, tails: dict | None = None):
    """sum_{n >= 1} t^n n^{-b} H^{(a)}_{n-1} for a != 1; t = None means t = 1.

    Head n < n0 is summed directly. For n >= n0 we write H^{(a)}_{n-1} =
    zeta(a) - zeta(a, n) and expand zeta(a, n) by Euler-Maclaurin. ``tails``
    caches sum_{n >= n0} t^n n^{-p} across calls at the same t.
    """
    bits = mpmath.mp.prec
    n0 = max(32, bits // 2)
    tails = {} if tails is None else tails
    tpow = tails.get("tpow")
    if tpow is None or len(tpow) != n0:
        tpow = [mpmath.mpf(1)] * n0
        if t is not None:
            for n in range(1, n0):
                tpow[n] = tpow[n - 1] * t
        tails.clear()
        tails["tpow"] = tpow
    head = mpmath.mpf(0)
    harm = mpmath.mpf(0)
    for n in range(1, n0):
        head += tpow[n] * harm / mpmath.mpf(n) ** b
        harm += mpmath.mpf(n) ** (-a)

    def tail(p):
        # sum_{n >= n0} t^n n^{-p}
        if t is None:
            return mpmath.zeta(p, n0)
        hit = tails.get(p)
        if hit is None:
            s = mpmath.fsum(tpow[n] * mpmath.mpf(n) ** (-p) for n in range(1, n0))
            full = li((int(p),))[0] if (li is not None and mpmath.isint(p)) else mpmath.polylog(p, t)
            hit = tails[p] = full - s
        return hit

    terms, rem = _em_terms(mpmath.mpf(a), n0, bits)
    v = head + mpmath.zeta(a) * tail(b)
    for c, p in terms:
        v -= c * tail(p + b)
    err = rem * (mpmath.zeta(2, n0) if t is None else 1) + _ulp_err(v) * 4
    return v, err


def _harmonic1_at_one(s):
    """zeta_2(1, s) = sum n^{-s} H_{n-1} via H_{n-1} = log n + gamma - 1/(2n) - sum B_2j/(2j n^2j)."""
    bits = mpmath.mp.prec
    n0 = max(32, bits // 2)
    head = mpmath.mpf(0)
    harm = mpmath.mpf(0)
    for n in range(1, n0):
        head += harm / mpmath.mpf(n) ** s
        harm += mpmath.mpf(1) / n
    v = head - mpmath.zeta(s, n0, 1) + mpmath.euler * mpmath.zeta(s, n0) - mpmath.zeta(s + 1, n0) / 2
    tiny = mpmath.mpf(2) ** (-bits - 10)
    j = 1
    while True:
        c = to_bigfloat(bernoulli(2 * j)) / (2 * j)
        size = abs(c) * mpmath.mpf(n0) ** (-(s + 2 * j - 1))
        if size < tiny:
            break
        v -= c * mpmath.zeta(s + 2 * j, n0)
        j += 1
    return v, 2 * size + _ulp_err(v) * 4


# ---------------------------------------------------------------- public Li API

def li_eval(w: Sequence[int], t, ctx: PrecisionCtx | None = None,
            method: str = "series") -> EvalResult:
    """Li_w(t) for integer indices of any sign and 0 < t < 1.

    ``method="series"`` sums the nested series directly. ``"auto"`` first
    applies the exact reductions described in the module docstring.
    """
    ctx = ctx or PrecisionCtx()
    w = _vec(w)
    if method not in ("series", "auto", "reduce"):
        raise ValueError(f"unknown method {method!r}")
    with ctx.workprec(16):
        t = _check_t(t)
        eng = _LiEngine(t, ctx, method)
        v, e = eng.li(w)
    route = Route.SERIES if method == "series" or eng.series_used else Route.REDUCTION
    return _result(ctx, v, e, route, rigorous=False)


def _eval_combo(c: LiCombination, eng: _LiEngine, logt: mpmath.mpf):
    v = mpmath.mpf(0)
    e = mpmath.mpf(0)
    for (q, w), coeff in c:
        x, ex = eng.li(w)
        pref = to_bigfloat(coeff) * (-logt) ** q / factorial(q)
        v += pref * x
        e += abs(pref) * ex
    return v, e + _ulp_err(v)


def licomb_eval(c: LiCombination, t, ctx: PrecisionCtx | None = None,
                method: str = "auto") -> EvalResult:
    """sum c (-log t)^q / q! Li_w(t) over the stored terms."""
    ctx = ctx or PrecisionCtx()
    with ctx.workprec(16):
        t = _check_t(t)
        eng = _LiEngine(t, ctx, method)
        v, e = _eval_combo(c, eng, mpmath.log(t))
    route = Route.SERIES if method == "series" or eng.series_used else Route.REDUCTION
    return _result(ctx, v, e, route)


# ---------------------------------------------------------------- MZVs

def in_domain(s: Sequence) -> bool:
    """s_{r-j+1} + ... + s_r > j for every j = 1..r."""
    acc = 0
    for j, x in enumerate(reversed(tuple(s)), start=1):
        acc += Fraction(x) if not isinstance(x, float) else x
        if not acc > j:
            return False
    return True


def _as_number(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"unsupported MZV argument {x!r}")


def _word_of(k: tuple[int, ...]) -> str:
    # Li_k(t) as an iterated integral from 0: letters "1" = dt/(1-t), "0" = dt/t
    return "".join("1" + "0" * (x - 1) for x in k)


def _index_of(word: str) -> tuple[int, ...]:
    out = []
    for ch in word:
        if ch == "1":
            out.append(1)
        else:
            out[-1] += 1
    return tuple(out)


def _mzv_halfsplit(k: tuple[int, ...], ctx: PrecisionCtx):
    """Positive admissible MZV by splitting the integration path at 1/2.

    zeta(w) = sum_{w = uv} L_u(1/2) L_{tau(v)}(1/2), where tau reverses a word
    and swaps the two letters. Every factor is a polylogarithm at 1/2.
    """
    half = mpmath.mpf(1) / 2
    word = _word_of(k)
    v = mpmath.mpf(0)
    e = mpmath.mpf(0)
    cache: dict = {}

    def L(wd: str):
        if not wd:
            return mpmath.mpf(1), mpmath.mpf(0)
        if wd not in cache:
            cache[wd] = _li_series(_index_of(wd), half, ctx)
        return cache[wd]

    for cut in range(len(word) + 1):
        u, rest = word[:cut], word[cut:]
        dual = "".join("1" if ch == "0" else "0" for ch in reversed(rest))
        x, ex = L(u)
        y, ey = L(dual)
        v += x * y
        e += abs(x) * ey + abs(y) * ex
    return v, e + _ulp_err(v)


def _mzv_integer(k: tuple[int, ...], ctx: PrecisionCtx):
    """Integer MZV of any supported depth; non-positive entries are summed out exactly."""
    if len(k) == 1:
        v = mpmath.zeta(k[0])
        return v, _ulp_err(v)
    for i, x in enumerate(k):
        if x <= 0:
            parts = []
            if i == 0:
                for j, cj in enumerate(faulhaber(-x)):
                    if cj:
                        parts.append((cj, (k[1] - j,) + k[2:]))
            else:
                for j, cj in enumerate(faulhaber(-x)):
                    if cj:
                        parts.append((cj, k[:i] + (k[i + 1] - j,) + k[i + 2:]))
                for j, cj in enumerate(faulhaber(-x, inclusive=True)):
                    if cj:
                        parts.append((-cj, k[:i - 1] + (k[i - 1] - j,) + k[i + 1:]))
            v = mpmath.mpf(0)
            e = mpmath.mpf(0)
            for c, sub in parts:
                y, ey = _mzv_integer(sub, ctx)
                v += to_bigfloat(c) * y
                e += abs(to_bigfloat(c)) * ey
            return v, e + _ulp_err(v)
    return _mzv_halfsplit(k, ctx)


def mzv_eval(s: Sequence, ctx: PrecisionCtx | None = None) -> EvalResult:
    """zeta_r(s) = sum_{0 < n_1 < ... < n_r} n_1^{-s_1} ... n_r^{-s_r} inside the convergence domain."""
    ctx = ctx or PrecisionCtx()
    s = tuple(_as_number(x) for x in s)
    if not s:
        raise ValueError("empty argument")
    if len(s) > 3:
        raise ValueError("depth at most 3 is supported")
    if not in_domain(s):
        raise DomainError(f"{tuple(str(x) for x in s)} is outside the convergence domain")
    with ctx.workprec(16):
        m = [to_bigfloat(x) for x in s]
        rigorous = True
        if len(s) == 1:
            v = mpmath.zeta(m[0])
            e = _ulp_err(v)
        elif len(s) == 2:
            if s[0] == 1:
                v, e = _harmonic1_at_one(m[1])
            else:
                v, e = _harmonic_weighted(m[0], m[1], None, None)
        else:
            if any(x.denominator != 1 for x in s):
                raise ValueError("depth-3 evaluation supports integer arguments only")
            v, e = _mzv_integer(tuple(int(x) for x in s), ctx)
    return _result(ctx, v, e, Route.SERIES, rigorous=rigorous)


# ---------------------------------------------------------------- extrapolation

@dataclass
class Extrapolation:
    value: mpmath.mpf
    err: mpmath.mpf
    tableau: list
    converged: bool


def extrapolate(hs: Sequence, values: Sequence, powers: int = 12, logs: int = 0) -> Extrapolation:
    """Estimate lim_{h -> 0} v(h) assuming v(h) = sum_{i <= powers, l <= logs} c_il h^i (log h)^l.

    With ``logs=0`` this is polynomial extrapolation to h = 0, the value Neville's
    scheme produces. Every window of K = (powers+1)(logs+1) consecutive points
    is fitted exactly and yields one estimate; the spread of the last two is the
    error estimate.
    """
    K = (powers + 1) * (logs + 1)
    if len(hs) < K + 1:
        raise ValueError(f"need at least {K + 1} samples, got {len(hs)}")
    basis = [(i, l) for i in range(powers + 1) for l in range(logs + 1)]
    tableau = []
    for end in range(K, len(hs) + 1):
        rows = []
        for h in hs[end - K:end]:
            lh = mpmath.log(h)
            rows.append([h ** i * lh ** l for i, l in basis])
        coef = mpmath.lu_solve(mpmath.matrix(rows), mpmath.matrix(list(values[end - K:end])))
        tableau.append(coef[0])
    err = abs(tableau[-1] - tableau[-2])
    converged = len(tableau) < 3 or err <= abs(tableau[-2] - tableau[-3]) * 4 + mpmath.mpf(2) ** (-mpmath.mp.prec // 2)
    return Extrapolation(tableau[-1], err, tableau, converged)


# ---------------------------------------------------------------- zeta^des

def _shifts(r: int) -> set[tuple[int, ...]]:
    return {m for (_, m) in coeff_a(r, 0).entries}


def route_b_applicable(k: Sequence[int]) -> bool:
    """Every MZV zeta_r(k + m) the expansion touches converges (so coefficient zeros cannot hide poles)."""
    k = _vec(k)
    return all(in_domain(tuple(x + y for x, y in zip(k, m))) for m in _shifts(len(k)))


def _route_b(k: tuple[int, ...], ctx: PrecisionCtx) -> EvalResult:
    coeffs: dict[tuple[int, ...], int] = {}
    for (l, m), a in coeff_a(len(k), 0).entries.items():
        c = a
        for kj, lj in zip(k, l):
            c *= pochhammer(kj, lj)
        coeffs[m] = coeffs.get(m, 0) + c
    v = mpmath.mpf(0)
    e = mpmath.mpf(0)
    with ctx.workprec(16):
        for m, c in sorted(coeffs.items()):
            if c == 0:
                continue
            z = mzv_eval(tuple(x + y for x, y in zip(k, m)), ctx)
            v += c * z.value
            e += abs(c) * z.err_bound
        e += _ulp_err(v)
    return _result(ctx, v, e, Route.COMBINATION_B, rigorous=False,
                      details={"terms": {str(m): c for m, c in sorted(coeffs.items()) if c}})


DEFAULT_SCHEDULE = (6, 24)


def _route_a(k: tuple[int, ...], ctx: PrecisionCtx, tol: float | None,
             schedule: tuple[int, int] = DEFAULT_SCHEDULE, powers: int = 12, logs: int = 0) -> EvalResult:
    j0, j1 = schedule
    combo = Zfull(k)
    spread = max([abs(x) for (_, w) in combo.terms for x in w] + [1])
    guard = j1 * (len(k) + spread + 3) + 32
    with ctx.workprec(guard):
        hs, vals, errs = [], [], []
        for j in range(j0, j1 + 1):
            h = mpmath.mpf(2) ** (-j)
            t = 1 - h
            eng = _LiEngine(t, ctx, "auto")
            v, e = _eval_combo(combo, eng, mpmath.log(t))
            hs.append(h)
            vals.append(v)
            errs.append(e)
        ex = extrapolate(hs, vals, powers, logs)
        err = ex.err + max(errs) * 2 ** (powers + logs)
    tableau = [mpmath.nstr(x, 20) for x in ex.tableau]
    if not ex.converged or (tol is not None and err > tol):
        raise NonConvergenceError(f"route A did not converge for {k}: spread {mpmath.nstr(err, 5)}",
                                  {"tableau": tableau, "schedule": schedule})
    return _result(ctx, ex.value, err, Route.EXTRAPOLATION_A, rigorous=False,
                      details={"tableau": tableau, "schedule": list(schedule)})


def deszeta_eval(k: Sequence[int], ctx: PrecisionCtx | None = None, route: str = "auto",
                 tol: float | None = 1e-8, cross_check: bool = False) -> EvalResult:
    """zeta^des_r(k) at an integer point.

    Non-positive points and k = (1,) are exact. Otherwise route B is used when applicable,
    then route A. With ``cross_check`` both routes run where possible and must
    agree within their combined error bounds.
    """
    ctx = ctx or PrecisionCtx()
    k = _vec(k)
    if route not in ("auto", "A", "B"):
        raise ValueError(f"unknown route {route!r}")
    if all(x <= 0 for x in k) and route == "auto":
        q = deszeta_nonpos_bernoulli(k)
        with ctx.workprec():
            return EvalResult(to_bigfloat(q), mpmath.mpf(0), Route.EXACT, rigorous=True, exact=q)
    if k == (1,) and route == "auto":
        # (1 - s) zeta(s) -> -1 as s -> 1
        with ctx.workprec():
            return EvalResult(mpmath.mpf(-1), mpmath.mpf(0), Route.EXACT, rigorous=True,
                              exact=Fraction(-1))
    b_ok = route_b_applicable(k)
    if route == "B" and not b_ok:
        raise DomainError(f"route B needs MZVs outside the convergence domain for {k}")
    if route == "A" and len(k) > 3:
        raise ValueError("route A supports depth at most 3")
    if route in ("auto", "B") and b_ok:
        res_b = _route_b(k, ctx)
        if not cross_check or len(k) > 3:
            return res_b
        res_a = _route_a(k, ctx, tol)
        if abs(res_a.value - res_b.value) > res_a.err_bound + res_b.err_bound:
            raise NonConvergenceError(f"routes A and B disagree at {k}",
                                      {"A": str(res_a.value), "B": str(res_b.value)})
        return res_b
    if len(k) > 3:
        raise ValueError("route A supports depth at most 3")
    return _route_a(k, ctx, tol)


def deszeta_trailing_reduction(k: Sequence[int], ctx: PrecisionCtx | None = None,
                               route: str = "auto") -> EvalResult:
    """zeta^des_r(s, -b) = sum_i C(b, i) zeta^des_{r-1}(s_1, ..., s_{r-1} - b + i) zeta^des_1(-i)."""
    ctx = ctx or PrecisionCtx()
    k = _vec(k)
    if k[-1] > 0:
        raise ValueError("last entry must be non-positive")
    if len(k) < 2:
        q = deszeta_nonpos_bernoulli(k)
        with ctx.workprec():
            return EvalResult(to_bigfloat(q), mpmath.mpf(0), Route.EXACT, True, q)
    b = -k[-1]
    head = k[:-1]
    exact = Fraction(0)
    all_exact = True
    v = mpmath.mpf(0)
    e = mpmath.mpf(0)
    with ctx.workprec(16):
        for i in range(b + 1):
            z1 = deszeta_nonpos_bernoulli((-i,))
            if z1 == 0:
                continue
            sub = lower_last(head, b - i)
            inner = (deszeta_trailing_reduction(sub, ctx, route) if sub[-1] <= 0
                     else deszeta_eval(sub, ctx, route=route))
            c = binom(b, i) * z1
            v += to_bigfloat(c) * inner.value
            e += abs(to_bigfloat(c)) * inner.err_bound
            if inner.exact is None:
                all_exact = False
            else:
                exact += c * inner.exact
    if all_exact:
        with ctx.workprec():
            return EvalResult(to_bigfloat(exact), mpmath.mpf(0), Route.TRAILING, True, exact)
    return _result(ctx, v, e, Route.TRAILING)


# ---------------------------------------------------------------- oracles

def _desli0(z):
    return z / (1 - z) + z * mpmath.log(z) / (1 - z) ** 2


def _apply_J_or_D(f: Callable, n: int, t):
    """J^n[f](t) = int_0^t f(z) log(t/z)^{n-1}/(n-1)! dz/z for n > 0; D^n for n < 0."""
    if n == 0:
        return f(t)
    if n > 0:
        lt = mpmath.log(t)
        return mpmath.quad(lambda z: f(z) * (lt - mpmath.log(z)) ** (n - 1) / z, [0, t]) / factorial(n - 1)
    # D = d/du with t = e^u
    return mpmath.diff(lambda u: f(mpmath.exp(u)), mpmath.log(t), -n)


def desli_quadrature_oracle(k: Sequence[int], t, ctx: PrecisionCtx | None = None,
                            tol: float = 1e-6) -> EvalResult:
    """desLi(k)(t) from its iterated J/D definition by quadrature and numerical differentiation."""
    ctx = ctx or PrecisionCtx()
    k = _vec(k)
    if len(k) > 2 or any(abs(x) > 2 for x in k):
        raise ValueError("oracle restricted to depth <= 2 and |k_i| <= 2")
    with mpmath.workdps(30):
        t = _check_t(t)
        try:
            inner = lambda z: _apply_J_or_D(_desli0, k[0], z)
            if len(k) == 1:
                v = inner(t)
                v2 = _with_dps(20, lambda: _apply_J_or_D(_desli0, k[0], t))
            else:
                outer = lambda z: _desli0(z) * inner(z)
                v = _apply_J_or_D(outer, k[1], t)
                v2 = _with_dps(20, lambda: _apply_J_or_D(
                    lambda z: _desli0(z) * _apply_J_or_D(_desli0, k[0], z), k[1], t))
        except (ZeroDivisionError, ValueError) as exc:
            raise OracleUnavailable(f"quadrature failed for {k}: {exc}") from exc
        err = abs(v - v2)
        if not mpmath.isfinite(v) or err > tol:
            raise OracleUnavailable(f"quadrature for {k} not stable (spread {mpmath.nstr(err, 3)})")
    return _result(ctx, v, err, Route.QUADRATURE)


def _with_dps(dps: int, fn: Callable):
    with mpmath.workdps(dps):
        return fn()


def lemma_limit_check(n: int, eps, ctx: PrecisionCtx | None = None) -> EvalResult:
    """(s - 1) zeta_2(n, s) - zeta(n) with s = 1 + eps."""
    if n < 2:
        raise ValueError("n must be at least 2")
    ctx = ctx or PrecisionCtx()
    eps = _as_number(eps)
    s = 1 + eps
    z2 = mzv_eval((n, s), ctx)
    with ctx.workprec(16):
        v = to_bigfloat(eps) * z2.value - mpmath.zeta(n)
        e = abs(to_bigfloat(eps)) * z2.err_bound + _ulp_err(v)
    return _result(ctx, v, e, Route.SERIES)
