"""Verification suites and report assembly for the command-line front end.

Every case is produced by a module-level function so that suites can be
fanned out over a process pool. Reports list cases sorted by id, which makes
them independent of scheduling order.
"""
from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from itertools import product
from typing import Any, Callable

import mpmath

from .closedform import deszeta_nonpos_bernoulli, deszeta_nonpos_iterdiff, genfun_check
from .licomb import Zfull, Zq, dr_bound, licomb_D, lower_last, \
    pochhammer_sum_identity
from .numcore import PrecisionCtx, binom
from .numeval import NonConvergenceError, deszeta_eval, deszeta_trailing_reduction, \
    lemma_limit_check, licomb_eval
from .renorm import F_value, check_coproduct_identity, check_F_generating, \
    check_F_recurrence, g_character
from .wordalg import Word, WordSum, closed_shuffle_depth11, closed_shuffle_depth21, \
    dword, format_word, format_wordsum, shuffle0_words, word_to_index

SCHEMA = 1
VERDICTS = ("pass", "fail", "skip")
LEVELS = ("raw", "psi-numeric", "exact")

DEFAULT_TOLS = {
    "special-values": 1e-6,
    "depth1-zeta": 1e-10,
    "shuffle-depth1": 1e-6,
    "homomorphism": 1e-9,
    "closed-forms": 1e-9,
    "product-law": 1e-10,
    "lemma-limit": 1e-3,
    "cross-route": 1e-6,
}


@dataclass
class RunConfig:
    bits: int = 192
    tols: dict[str, float] = field(default_factory=dict)
    max_depth: int = 3
    max_weight: int = 4
    format: str | None = None
    seed: int = 42
    jobs: int = 1

    def tol(self, suite: str) -> float:
        return self.tols.get(suite, DEFAULT_TOLS.get(suite, 1e-9))

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def override(self, **kw) -> "RunConfig":
        data = asdict(self)
        for k, v in kw.items():
            if v is None:
                continue
            if k == "tols":
                data["tols"] = {**data["tols"], **v}
            else:
                data[k] = v
        return RunConfig(**data)


@dataclass
class Case:
    id: str
    inputs: dict[str, Any]
    expected: str | None
    actual: str | None
    abs_err: float | None
    verdict: str
    route: str | None = None
    equality_level: str | None = None


@dataclass
class Report:
    suite: str
    cases: list[Case]
    wall_time: float = 0.0

    @property
    def summary(self) -> dict[str, int]:
        out = {v: 0 for v in VERDICTS}
        for c in self.cases:
            out[c.verdict] += 1
        out["total"] = len(self.cases)
        return out

    @property
    def ok(self) -> bool:
        return all(c.verdict != "fail" for c in self.cases)

    def to_dict(self) -> dict[str, Any]:
        return {"schema": SCHEMA, "suite": self.suite,
                "cases": [asdict(c) for c in self.cases],
                "summary": self.summary, "wall_time": round(self.wall_time, 3)}


def _s(x) -> str:
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 25)
    return str(x)


def _f(x) -> float:
    return float(x)


def _num_case(cid, inputs, expected, actual, tol, route=None, rel=False, level=None) -> Case:
    err = abs(actual - expected)
    if rel:
        err = err / max(abs(expected), abs(actual), mpmath.mpf(10) ** -30)
    return Case(cid, inputs, _s(expected), _s(actual), _f(err),
                "pass" if err <= tol else "fail", route, level)


def _error_case(cid, inputs, exc: Exception) -> Case:
    return Case(cid, inputs, None, f"{type(exc).__name__}: {exc}", None, "fail")


def _kid(k) -> str:
    return "(" + ",".join(f"{x:+d}" for x in k) + ")"


# ---------------------------------------------------------------- case functions

def case_exact_value(k: tuple[int, ...]) -> Case:
    a = deszeta_nonpos_bernoulli(k)
    b = deszeta_nonpos_iterdiff(k)
    return Case(f"value{_kid(k)}", {"k": list(k)}, str(a), str(b), float(abs(a - b)),
                "pass" if a == b else "fail", "exact", "exact")


def case_genfun(r: int, order: int) -> Case:
    rep = genfun_check(r, order)
    actual = "identity holds" if rep.ok else f"differs at {rep.first_discrepancy}: {rep.lhs} vs {rep.rhs}"
    return Case(f"genfun(r={r})", {"r": r, "order": order}, "identity holds", actual,
                None, "pass" if rep.ok else "fail", "exact", "exact")


def case_special(k: tuple[int, ...], expected: str, bits: int, tol: float) -> Case:
    ctx = PrecisionCtx(bits)
    inputs = {"k": list(k), "route": "A", "bits": bits}
    try:
        res = deszeta_eval(k, ctx, route="A", tol=None)
    except NonConvergenceError as exc:
        return _error_case(f"special{_kid(k)}", inputs, exc)
    with ctx.workprec():
        return _num_case(f"special{_kid(k)}", inputs, mpmath.mpf(Fraction(expected).numerator)
                         / Fraction(expected).denominator, res.value, tol, res.route.value)


def case_depth1_zeta(k: int, bits: int, tol: float) -> Case:
    ctx = PrecisionCtx(bits)
    inputs = {"k": k, "route": "A"}
    try:
        res = deszeta_eval((k,), ctx, route="A", tol=None)
    except NonConvergenceError as exc:
        return _error_case(f"zeta1({k})", inputs, exc)
    with ctx.workprec():
        return _num_case(f"zeta1({k})", inputs, (1 - k) * mpmath.zeta(k), res.value, tol,
                         res.route.value)


def case_shuffle_depth1(n: int, m: int, bits: int, tol: float) -> Case:
    ctx = PrecisionCtx(bits)
    inputs = {"n": n, "m": m}
    try:
        lhs = deszeta_eval((n,), ctx).value * deszeta_eval((m,), ctx).value
        rhs = mpmath.mpf(0)
        routes = set()
        for j in range(1, n + m):
            c = binom(j - 1, n - 1) + binom(j - 1, m - 1)
            if c:
                z = deszeta_eval((n + m - j, j), ctx)
                routes.add(z.route.value)
                rhs += c * z.value
    except NonConvergenceError as exc:
        return _error_case(f"shuffle1({n},{m})", inputs, exc)
    with ctx.workprec():
        return _num_case(f"shuffle1({n},{m})", inputs, rhs, lhs, tol, "+".join(sorted(routes)))


def _psi(w: Word, t, ctx) -> mpmath.mpf:
    return licomb_eval(Zfull(word_to_index(w)), t, ctx).value


def _psi_sum(s: WordSum, t, ctx) -> mpmath.mpf:
    out = mpmath.mpf(0)
    for w, c in s:
        out += mpmath.mpf(c.numerator) / c.denominator * _psi(w, t, ctx)
    return out


def case_homomorphism(cid: str, u: tuple[int, ...], v: tuple[int, ...], t: str,
                      bits: int, tol: float) -> Case:
    ctx = PrecisionCtx(bits)
    wu, wv = Word(u), Word(v)
    inputs = {"u": format_word(wu), "v": format_word(wv), "t": t}
    with ctx.workprec():
        tt = mpmath.mpf(t)
        prod = shuffle0_words(wu, wv)
        lhs = _psi_sum(prod, tt, ctx)
        rhs = _psi(wu, tt, ctx) * _psi(wv, tt, ctx)
        return _num_case(cid, inputs, rhs, lhs, tol, "li-combination", rel=True, level="psi-numeric")


def _closed_case(cid: str, inputs: dict, raw: WordSum, closed: WordSum, bits: int, tol: float) -> Case:
    if raw == closed:
        return Case(cid, inputs, format_wordsum(closed), format_wordsum(raw), 0.0, "pass", "symbolic", "raw")
    ctx = PrecisionCtx(bits)
    worst = mpmath.mpf(0)
    with ctx.workprec():
        for t in ("0.3", "0.6"):
            tt = mpmath.mpf(t)
            worst = max(worst, abs(_psi_sum(raw, tt, ctx) - _psi_sum(closed, tt, ctx)))
    return Case(cid, inputs, format_wordsum(closed), format_wordsum(raw), _f(worst),
                "pass" if worst <= tol else "fail", "li-combination", "psi-numeric")


def case_closed11(k: int, l: int, bits: int, tol: float) -> Case:
    raw = shuffle0_words(dword(k), Word((l,)))
    return _closed_case(f"closed11({k},{l})", {"k": k, "l": l}, raw,
                        closed_shuffle_depth11(k, l), bits, tol)


def case_closed21(k: int, l: int, m: int, bits: int, tol: float) -> Case:
    raw = shuffle0_words(Word((-k, l)), Word((m,)))
    return _closed_case(f"closed21({k},{l},{m})", {"k": k, "l": l, "m": m}, raw,
                        closed_shuffle_depth21(k, l, m), bits, tol)


def case_symbolic(k: tuple[int, ...]) -> Case:
    problems = []
    if licomb_D(Zfull(k)) != Zfull(lower_last(k)):
        problems.append("D[Z(k)] != Z(k')")
    d = dr_bound(len(k))
    for q in range(1, d + 2):
        if Zq(k, q) != licomb_D(Zq(k, q - 1)) - Zq(lower_last(k), q - 1):
            problems.append(f"recurrence fails at q={q}")
    if Zq(k, d + 1):
        problems.append(f"Z_{d + 1} does not vanish")
    actual = "; ".join(problems) or "all identities hold"
    return Case(f"symbolic{_kid(k)}", {"k": list(k), "d_r": d}, "all identities hold", actual,
                None, "fail" if problems else "pass", "symbolic", "exact")


def case_dr(r: int, expected: int) -> Case:
    d = dr_bound(r)
    return Case(f"d_r(r={r})", {"r": r}, str(expected), str(d), float(abs(d - expected)),
                "pass" if d == expected else "fail", "symbolic", "exact")


def case_product_law(k: tuple[int, ...], bits: int, tol: float) -> Case:
    ctx = PrecisionCtx(bits)
    t = mpmath.mpf(1) / 2
    with ctx.workprec():
        lhs = licomb_eval(Zfull(k + (0,)), t, ctx).value
        rhs = licomb_eval(Zfull((0,)), t, ctx).value * licomb_eval(Zfull(k), t, ctx).value
        return _num_case(f"product{_kid(k)}", {"k": list(k), "t": "1/2"}, rhs, lhs, tol,
                         "li-combination", level="psi-numeric")


def case_renorm_value(k: tuple[int, ...], pole: bool) -> Case:
    order = sum(k) + 2 + (2 * len(k) if pole else 0)
    spec = g_character(order, {-2: 1} if pole else None)
    f = F_value(k, spec)
    z = deszeta_nonpos_bernoulli(tuple(-x for x in k))
    tag = "F_pole" if pole else "F"
    return Case(f"{tag}{_kid(k)}", {"k": list(k), "f": "z^-2+g" if pole else "g"}, str(z), str(f),
                float(abs(f - z)), "pass" if f == z else "fail", "birkhoff", "exact")


def case_renorm_generating(r: int, order: int) -> Case:
    rep = check_F_generating(r, g_character(order + 2), order)
    actual = "identity holds" if rep.ok else f"differs at {rep.first_discrepancy}: {rep.lhs} vs {rep.rhs}"
    return Case(f"F_generating(r={r})", {"r": r, "order": order}, "identity holds", actual, None,
                "pass" if rep.ok else "fail", "birkhoff", "exact")


def case_renorm_coproduct(k: tuple[int, ...]) -> Case:
    w = dword(*k)
    ok = check_coproduct_identity(w, g_character(sum(k) + 4))
    return Case(f"coproduct{_kid(k)}", {"word": format_word(w)}, "identity holds",
                "identity holds" if ok else "identity fails", None,
                "pass" if ok else "fail", "birkhoff", "exact")


def case_renorm_recurrence(k: tuple[int, ...]) -> Case:
    ok = check_F_recurrence(k, g_character(sum(k) + 2))
    return Case(f"F_recurrence{_kid(k)}", {"k": list(k)}, "identity holds",
                "identity holds" if ok else "identity fails", None,
                "pass" if ok else "fail", "birkhoff", "exact")


def case_pochhammer(i: int, l: int, q: int, s: int) -> Case:
    lhs, rhs = pochhammer_sum_identity(l, q, s)
    return Case(f"pochhammer[{i:03d}]", {"l": l, "q": q, "s": s}, str(rhs), str(lhs),
                float(abs(lhs - rhs)), "pass" if lhs == rhs else "fail", "exact", "exact")


def case_lemma(n: int, eps: str, bits: int, tol: float) -> Case:
    res = lemma_limit_check(n, Fraction(eps), PrecisionCtx(bits))
    d = abs(res.value)
    return Case(f"lemma(n={n},eps={eps})", {"n": n, "eps": eps}, "0", _s(res.value), _f(d),
                "pass" if d <= tol else "fail", res.route.value)


def case_cross_exact(k: tuple[int, ...], expected: str, bits: int) -> Case:
    res = deszeta_trailing_reduction(k, PrecisionCtx(bits))
    ok = res.exact is not None and res.exact == Fraction(expected)
    return Case(f"cross{_kid(k)}:recurrence", {"k": list(k)}, expected, str(res.exact),
                float(abs(res.exact - Fraction(expected))) if res.exact is not None else None,
                "pass" if ok else "fail", res.route.value, "exact")


def case_cross_route_a(k: tuple[int, ...], expected: str, bits: int, tol: float) -> Case:
    ctx = PrecisionCtx(bits)
    cid = f"cross{_kid(k)}:route-A"
    try:
        res = deszeta_eval(k, ctx, route="A", tol=None)
    except NonConvergenceError as exc:
        return _error_case(cid, {"k": list(k)}, exc)
    e = Fraction(expected)
    with ctx.workprec():
        return _num_case(cid, {"k": list(k)}, mpmath.mpf(e.numerator) / e.denominator, res.value,
                         tol, res.route.value)


def case_cross_word(expected: str, bits: int, tol: float) -> Case:
    # dy sh_0 jy = dyjy - yy, so zeta(-1) zeta(1) = zeta(1,-1) - zeta(0,0)
    ctx = PrecisionCtx(bits)
    s = shuffle0_words(dword(1), Word((1,)))
    target = Word((-1, 1))
    c_target = s.terms.get(target, 0)
    rest = s - WordSum({target: c_target})
    with ctx.workprec():
        lhs = deszeta_eval((-1,), ctx).value * deszeta_eval((1,), ctx, route="A", tol=None).value
        other = mpmath.mpf(0)
        for w, c in rest:
            z = deszeta_eval(word_to_index(w), ctx, route="A" if max(word_to_index(w)) > 0 else "auto",
                             tol=None)
            other += mpmath.mpf(c.numerator) / c.denominator * z.value
        val = (lhs - other) / c_target
        e = Fraction(expected)
        return _num_case("cross(+1,-1):word-identity", {"u": "[-1]", "v": "[1]", "expansion": format_wordsum(s)},
                         mpmath.mpf(e.numerator) / e.denominator, val, tol, "shuffle")


# ---------------------------------------------------------------- suites

Task = tuple[Callable[..., Case], tuple]


def suite_exact_values(cfg: RunConfig) -> list[Task]:
    tasks: list[Task] = []
    for r in range(1, cfg.max_depth + 1):
        for k in product(range(5), repeat=r):
            tasks.append((case_exact_value, (tuple(-x for x in k),)))
        tasks.append((case_genfun, (r, 6)))
    return tasks


def suite_special_values(cfg: RunConfig) -> list[Task]:
    tol = cfg.tol("special-values")
    return [(case_special, ((1,), "-1", cfg.bits, tol)),
            (case_special, ((1, 1), "1/2", cfg.bits, tol))]


def suite_depth1_zeta(cfg: RunConfig) -> list[Task]:
    return [(case_depth1_zeta, (k, cfg.bits, cfg.tol("depth1-zeta"))) for k in range(2, 7)]


def suite_shuffle_depth1(cfg: RunConfig) -> list[Task]:
    tol = cfg.tol("shuffle-depth1")
    return [(case_shuffle_depth1, (n, m, cfg.bits, tol))
            for n, m in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)]]


def random_word_pairs(seed: int, count: int = 50, max_depth: int = 2, max_exp: int = 3):
    rng = random.Random(seed)

    def word():
        return tuple(rng.randint(-max_exp, max_exp) for _ in range(rng.randint(1, max_depth)))

    return [(word(), word()) for _ in range(count)]


def suite_homomorphism(cfg: RunConfig) -> list[Task]:
    tol = cfg.tol("homomorphism")
    tasks: list[Task] = []
    for i, (u, v) in enumerate(random_word_pairs(cfg.seed)):
        for t in ("0.3", "0.6"):
            tasks.append((case_homomorphism, (f"hom[{i:02d}]@t={t}", u, v, t, cfg.bits, tol)))
    return tasks


def suite_closed_forms(cfg: RunConfig) -> list[Task]:
    tol = cfg.tol("closed-forms")
    tasks: list[Task] = [(case_closed11, (k, l, cfg.bits, tol)) for k, l in product((1, 2, 3), repeat=2)]
    tasks += [(case_closed21, (k, l, m, cfg.bits, tol)) for k, l, m in product((1, 2, 3), repeat=3)]
    return tasks


def suite_symbolic(cfg: RunConfig) -> list[Task]:
    tasks: list[Task] = [(case_dr, (1, 1)), (case_dr, (2, 2))]
    for r in range(1, cfg.max_depth + 1):
        tasks += [(case_symbolic, (k,)) for k in product(range(-3, 4), repeat=r)]
    return tasks


def suite_product_law(cfg: RunConfig) -> list[Task]:
    tol = cfg.tol("product-law")
    return [(case_product_law, (k, cfg.bits, tol))
            for r in (1, 2) for k in product(range(-2, 3), repeat=r)]


def suite_renorm(cfg: RunConfig) -> list[Task]:
    tasks: list[Task] = []
    for r in range(1, cfg.max_depth + 1):
        for k in product(range(cfg.max_weight + 1), repeat=r):
            if sum(k) <= cfg.max_weight:
                tasks.append((case_renorm_value, (k, False)))
                tasks.append((case_renorm_value, (k, True)))
        tasks.append((case_renorm_generating, (r, 6)))
    for r in (2, 3):
        for k in product(range(5), repeat=r):
            if sum(k) <= 4:
                tasks.append((case_renorm_coproduct, (k,)))
            if sum(k) <= 5:
                tasks.append((case_renorm_recurrence, (k,)))
    return tasks


def suite_pochhammer(cfg: RunConfig) -> list[Task]:
    rng = random.Random(cfg.seed)
    return [(case_pochhammer, (i, rng.randint(0, 6), rng.randint(0, 6), rng.randint(-10, 10)))
            for i in range(200)]


def suite_lemma_limit(cfg: RunConfig) -> list[Task]:
    tol = cfg.tol("lemma-limit")
    return [(case_lemma, (3, "1/10000", cfg.bits, tol)),
            (case_lemma, (2, "1/100000", cfg.bits, min(tol, 1e-4)))]


def suite_cross_route(cfg: RunConfig) -> list[Task]:
    tol = cfg.tol("cross-route")
    return [(case_cross_exact, ((1, -1), "5/12", cfg.bits)),
            (case_cross_route_a, ((1, -1), "5/12", cfg.bits, tol)),
            (case_cross_word, ("5/12", cfg.bits, tol))]


SUITES: dict[str, Callable[[RunConfig], list[Task]]] = {
    "exact-values": suite_exact_values,
    "special-values": suite_special_values,
    "depth1-zeta": suite_depth1_zeta,
    "shuffle-depth1": suite_shuffle_depth1,
    "homomorphism": suite_homomorphism,
    "closed-forms": suite_closed_forms,
    "symbolic": suite_symbolic,
    "product-law": suite_product_law,
    "renorm": suite_renorm,
    "pochhammer": suite_pochhammer,
    "lemma-limit": suite_lemma_limit,
    "cross-route": suite_cross_route,
}


def _run_task(task: Task) -> Case:
    fn, args = task
    try:
        return fn(*args)
    except Exception as exc:  # a crash is a failed case, not a crashed harness
        return _error_case(f"{fn.__name__}{args!r}", {"args": repr(args)}, exc)


def run_suite(name: str, cfg: RunConfig) -> Report:
    """Run one suite (or ``all``) and return its report, cases sorted by id."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(name)
    start = time.perf_counter()
    tasks: list[tuple[str, Task]] = []
    for n in names:
        tasks += [(n, t) for t in SUITES[n](cfg)]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            cases = list(pool.map(_run_task, [t for _, t in tasks], chunksize=4))
    else:
        cases = [_run_task(t) for _, t in tasks]
    if len(names) > 1:
        cases = [Case(**{**asdict(c), "id": f"{n}/{c.id}"}) for (n, _), c in zip(tasks, cases)]
    cases.sort(key=lambda c: c.id)
    return Report(name, cases, time.perf_counter() - start)


def default_bits() -> int:
    env = os.environ.get("DESZETA_PREC")
    if env is None:
        return RunConfig.bits
    try:
        bits = int(env)
    except ValueError:
        raise ValueError(f"DESZETA_PREC must be an integer, got {env!r}") from None
    return bits
