"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""
import time
from fractions import Fraction
from itertools import product

import mpmath
import pytest

from deszeta.closedform import deszeta_nonpos_bernoulli, deszeta_nonpos_iterdiff
from deszeta.harness import RunConfig, run_suite
from deszeta.licomb import dr_bound
from deszeta.numcore import PrecisionCtx
from deszeta.numeval import deszeta_eval, lemma_limit_check

CFG = RunConfig(bits=192, seed=42)


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[acceptance {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def _failures(rep):
    return [c.id for c in rep.cases if c.verdict != "pass"]


def test_criterion_01_exact_value_table(verdict):
    start = time.perf_counter()
    bad = []
    n = 0
    for r in (1, 2, 3):
        for k in product(range(5), repeat=r):
            k = tuple(-x for x in k)
            n += 1
            if deszeta_nonpos_bernoulli(k) != deszeta_nonpos_iterdiff(k):
                bad.append(k)
    named = {(0,): Fraction(-1, 2), (-1,): Fraction(-1, 6), (0, 0): Fraction(1, 4)}
    bad += [k for k, v in named.items()
            if deszeta_nonpos_bernoulli(k) != v or deszeta_nonpos_iterdiff(k) != v]
    elapsed = time.perf_counter() - start
    verdict(1, not bad and elapsed < 30,
            f"{n} points, both exact routes equal, named values match; {elapsed:.2f} s; mismatches {bad}")


@pytest.mark.parametrize("k, want", [((1,), Fraction(-1)), ((1, 1), Fraction(1, 2))])
def test_criterion_02_special_values_route_a(verdict, k, want):
    start = time.perf_counter()
    r = deszeta_eval(k, PrecisionCtx(192), route="A", tol=None)
    elapsed = time.perf_counter() - start
    with mpmath.workprec(192):
        err = abs(r.value - mpmath.mpf(want.numerator) / want.denominator)
    verdict(2, r.route.value == "extrapolation-A" and err <= 1e-6 and elapsed <= 60,
            f"zeta_des{k} = {mpmath.nstr(r.value, 18)} (route A), |error| {float(err):.2e}, {elapsed:.2f} s")


def test_criterion_03_depth_one_values(verdict):
    rep = run_suite("depth1-zeta", CFG)
    worst = max(c.abs_err for c in rep.cases)
    ok = rep.ok and len(rep.cases) == 5 and worst <= 1e-10
    verdict(3, ok, f"zeta_des_1(k) vs (1-k) zeta(k), k = 2..6 by route A; worst {worst:.2e}")


def test_criterion_04_depth_one_shuffle(verdict):
    rep = run_suite("shuffle-depth1", CFG.override(tols={"shuffle-depth1": 1e-6}))
    worst = max(c.abs_err for c in rep.cases)
    verdict(4, rep.ok and len(rep.cases) == 5,
            f"(n,m) in (1,1),(1,2),(2,2),(2,3),(3,3); worst residual {worst:.2e}; failures {_failures(rep)}")


def test_criterion_05_homomorphism_fuzz(verdict):
    rep = run_suite("homomorphism", CFG)
    worst = max(c.abs_err for c in rep.cases)
    verdict(5, rep.ok and len(rep.cases) == 100,
            f"50 seeded pairs at t = 0.3, 0.6; worst relative error {worst:.2e}; failures {len(_failures(rep))}")


def test_criterion_06_closed_forms(verdict):
    rep = run_suite("closed-forms", CFG)
    levels = {c.equality_level for c in rep.cases}
    ok = rep.ok and len(rep.cases) == 9 + 27 and levels <= {"raw", "psi-numeric"}
    counts = {lv: sum(c.equality_level == lv for c in rep.cases) for lv in sorted(levels)}
    verdict(6, ok, f"36 closed-form cases; equality levels {counts}; failures {_failures(rep)}")


def test_criterion_07_symbolic_calculus(verdict):
    rep = run_suite("symbolic", CFG)
    ok = rep.ok and dr_bound(1) == 1 and dr_bound(2) == 2 and len(rep.cases) == 7 + 49 + 343 + 2
    verdict(7, ok, f"D[Z(k)] = Z(k'), recurrence, vanishing on [-3,3]^r, r <= 3; "
                   f"d_1 = {dr_bound(1)}, d_2 = {dr_bound(2)}; failures {_failures(rep)}")


def test_criterion_08_product_law(verdict):
    rep = run_suite("product-law", CFG)
    worst = max(c.abs_err for c in rep.cases)
    verdict(8, rep.ok and len(rep.cases) == 30,
            f"|Z(k,0) - Z(0)Z(k)| at t = 1/2, k in [-2,2]^r, r <= 2; worst {worst:.2e}")


def test_criterion_09_renormalization(verdict):
    rep = run_suite("renorm", CFG)
    kinds = {c.id.split("(")[0] for c in rep.cases}
    ok = rep.ok and {"F", "F_pole", "F_generating", "coproduct", "F_recurrence"} <= kinds
    verdict(9, ok, f"{len(rep.cases)} exact cases (values, pole independence, generating identity "
                   f"order 6, coproduct identity); failures {_failures(rep)}")


def test_criterion_10_pochhammer_lemma(verdict):
    rep = run_suite("pochhammer", CFG)
    ranges_ok = all(0 <= c.inputs["l"] <= 6 and 0 <= c.inputs["q"] <= 6 and abs(c.inputs["s"]) <= 10
                    for c in rep.cases)
    verdict(10, rep.ok and len(rep.cases) == 200 and ranges_ok,
            f"200 seeded (l, q, s); failures {_failures(rep)}")


def test_criterion_11_lemma_limit(verdict):
    r = lemma_limit_check(3, Fraction(1, 10 ** 4), PrecisionCtx(192))
    d = abs(float(r.value))
    verdict(11, d <= 1e-3, f"|(s-1) zeta_2(3, 1+1e-4) - zeta(3)| = {d:.2e}")


def test_criterion_12_cross_route(verdict):
    rep = run_suite("cross-route", CFG)
    by = {c.id.split(":")[1]: c for c in rep.cases}
    ok = (rep.ok and by["recurrence"].actual == "5/12" and by["route-A"].abs_err <= 1e-6
          and by["word-identity"].abs_err <= 1e-6)
    verdict(12, ok, f"zeta_des(1,-1): recurrence {by['recurrence'].actual}, route A error "
                    f"{by['route-A'].abs_err:.2e}, word identity error {by['word-identity'].abs_err:.2e}")
