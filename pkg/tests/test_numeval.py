from fractions import Fraction
from itertools import product

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from deszeta.closedform import deszeta_nonpos_bernoulli
from deszeta.licomb import Zfull
from deszeta.numcore import PrecisionCtx
from deszeta.numeval import DomainError, EvalResult, Route, deszeta_eval, \
    deszeta_trailing_reduction, desli_quadrature_oracle, extrapolate, in_domain, \
    lemma_limit_check, li_eval, licomb_eval, mzv_eval, route_b_applicable

CTX = PrecisionCtx(160)
TIGHT = mpmath.mpf(10) ** -40


def naive_li(w, t, n_max=400):
    # sum over 0 < n_1 < n_2 < n_max of t^{n_2} / (n_1^{w_1} n_2^{w_2}); depth <= 2
    if len(w) == 1:
        return mpmath.fsum(t ** n * mpmath.mpf(n) ** (-w[0]) for n in range(1, n_max))
    total = mpmath.mpf(0)
    part = mpmath.mpf(0)
    for n in range(1, n_max):
        total += t ** n * part * mpmath.mpf(n) ** (-w[1])
        part += mpmath.mpf(n) ** (-w[0])
    return total


def close(a, b, tol=TIGHT):
    return abs(a - b) <= tol * max(1, abs(b))


@pytest.mark.parametrize("t", ["0.1", "0.5", "0.9"])
def test_nonpositive_depth_one_closed_forms(t):
    with CTX.workprec():
        t = mpmath.mpf(t)
        assert close(li_eval((0,), t, CTX, "auto").value, t / (1 - t))
        assert close(li_eval((-1,), t, CTX, "auto").value, t / (1 - t) ** 2)
        assert close(li_eval((-2,), t, CTX, "auto").value, t * (1 + t) / (1 - t) ** 3)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_depth_one_against_polylog(k):
    with CTX.workprec():
        t = mpmath.mpf("0.7")
        assert close(li_eval((k,), t, CTX, "auto").value, mpmath.polylog(k, t))


@pytest.mark.parametrize("w", list(product((-2, -1, 0, 1, 2, 3), repeat=2)))
def test_depth_two_against_naive_sum(w):
    with CTX.workprec():
        t = mpmath.mpf("0.3")
        want = naive_li(w, t)
        assert close(li_eval(w, t, CTX, "auto").value, want, mpmath.mpf(10) ** -35)
        assert close(li_eval(w, t, CTX, "series").value, want, mpmath.mpf(10) ** -35)


def test_li11_closed_form():
    with CTX.workprec():
        t = mpmath.mpf("0.95")
        assert close(li_eval((1, 1), t, CTX, "auto").value, mpmath.log(1 - t) ** 2 / 2)


@settings(max_examples=25)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3), st.sampled_from(["0.2", "0.6"]))
def test_reductions_match_series(w, t):
    with CTX.workprec():
        a = li_eval(w, t, CTX, "auto")
        b = li_eval(w, t, CTX, "series")
        assert abs(a.value - b.value) <= a.err_bound + b.err_bound + TIGHT * max(1, abs(b.value))


def test_li_domain():
    with pytest.raises(ValueError):
        li_eval((1,), 1)
    with pytest.raises(ValueError):
        li_eval((1,), "0.5", method="magic")


@pytest.mark.parametrize("s, want", [
    ((2,), lambda: mpmath.pi ** 2 / 6),
    ((1, 2), lambda: mpmath.zeta(3)),
    ((2, 2), lambda: mpmath.pi ** 4 / 120),
    ((1, 3), lambda: mpmath.pi ** 4 / 360),
    ((1, 1, 2), lambda: mpmath.zeta(4)),
    ((2, 2, 2), lambda: mpmath.pi ** 6 / 5040),
    ((0, 3), lambda: mpmath.zeta(2) - mpmath.zeta(3)),
])
def test_mzv_known_values(s, want):
    with CTX.workprec():
        r = mzv_eval(s, CTX)
        assert close(r.value, want(), mpmath.mpf(10) ** -35)
        assert r.err_bound < mpmath.mpf(10) ** -35


def test_mzv_domain():
    assert in_domain((1, 2)) and not in_domain((3, 1)) and not in_domain((1, 1))
    with pytest.raises(DomainError):
        mzv_eval((3, 1))


def test_mzv_real_arguments():
    # zeta(0, s) = zeta(s - 1) - zeta(s)
    with CTX.workprec():
        s = Fraction(5, 2)
        r = mzv_eval((0, s), CTX)
        want = mpmath.zeta(mpmath.mpf(3) / 2) - mpmath.zeta(mpmath.mpf(5) / 2)
        assert close(r.value, want, mpmath.mpf(10) ** -35)


def test_extrapolate_log_model():
    with mpmath.workprec(200):
        hs = [mpmath.mpf(2) ** -j for j in range(4, 24)]
        vals = [2 + 3 * h + h * mpmath.log(h) - h ** 2 * mpmath.log(h) ** 2 for h in hs]
        ex = extrapolate(hs, vals, powers=3, logs=3)
        assert abs(ex.value - 2) < mpmath.mpf(10) ** -30
        assert ex.converged


def test_extrapolate_polynomial_model():
    with mpmath.workprec(200):
        hs = [mpmath.mpf(2) ** -j for j in range(6, 25)]
        vals = [mpmath.exp(h) / (1 + h) for h in hs]
        ex = extrapolate(hs, vals)
        assert abs(ex.value - 1) < mpmath.mpf(10) ** -50
        assert ex.converged and len(ex.tableau) == len(hs) - 12


def test_extrapolate_needs_samples():
    with pytest.raises(ValueError):
        extrapolate([1, 2], [1, 2])


def test_exact_points():
    r = deszeta_eval((0, 0))
    assert r.exact == Fraction(1, 4) and r.route is Route.EXACT
    assert deszeta_eval((1,)).exact == -1


@pytest.mark.parametrize("k, want", [((1,), -1), ((1, 1), Fraction(1, 2)), ((1, -1), Fraction(5, 12))])
def test_route_a_values(k, want):
    r = deszeta_eval(k, PrecisionCtx(192), route="A", tol=1e-8)
    want = Fraction(want)
    assert r.route is Route.EXTRAPOLATION_A
    assert abs(r.value - mpmath.mpf(want.numerator) / want.denominator) < 1e-12
    assert r.err_bound < 1e-8


@pytest.mark.parametrize("k", [2, 3, 4])
def test_route_b_depth_one(k):
    with CTX.workprec():
        r = deszeta_eval((k,), CTX, route="B")
        assert close(r.value, (1 - k) * mpmath.zeta(k), mpmath.mpf(10) ** -35)


def test_routes_agree_on_depth_two():
    r = deszeta_eval((2, 2), PrecisionCtx(192), cross_check=True)
    assert r.route is Route.COMBINATION_B


def test_route_b_applicability():
    assert not route_b_applicable((1,))
    assert not route_b_applicable((1, 1))
    assert route_b_applicable((2, 2))
    with pytest.raises(DomainError):
        deszeta_eval((1, 1), route="B")
    with pytest.raises(ValueError):
        deszeta_eval((1,), route="C")


@pytest.mark.parametrize("k", [(1, -1), (2, 0), (2, -2), (0, -3)])
def test_trailing_reduction(k):
    r = deszeta_trailing_reduction(k, CTX)
    if k == (1, -1):
        assert r.exact == Fraction(5, 12)
    if all(x <= 0 for x in k):
        assert r.exact == deszeta_nonpos_bernoulli(k)
    if k == (2, 0):
        # zeta(2, 0) = zeta(2) zeta(0) + ... = -1/2 zeta_des(2)
        with CTX.workprec():
            assert close(r.value, -deszeta_eval((2,), CTX).value / 2, mpmath.mpf(10) ** -30)


def test_trailing_reduction_against_route_a():
    a = deszeta_trailing_reduction((2, -1), PrecisionCtx(192))
    b = deszeta_eval((2, -1), PrecisionCtx(192), route="A", tol=1e-8)
    assert abs(a.value - b.value) < 1e-9


@pytest.mark.parametrize("k", [(0,), (1,), (-1,), (2,), (1, 1), (0, 1), (-1, 2), (2, -1)])
def test_quadrature_oracle(k):
    ctx = PrecisionCtx(128)
    q = desli_quadrature_oracle(k, "0.5", ctx)
    v = licomb_eval(Zfull(k), Fraction(1, 2), ctx)
    assert abs(q.value - v.value) < 1e-12


def test_desli_examples():
    ctx = PrecisionCtx(128)
    with ctx.workprec():
        assert close(licomb_eval(Zfull((0,)), "0.5", ctx).value, 1 - 2 * mpmath.log(2), mpmath.mpf(10) ** -30)
        assert abs(licomb_eval(Zfull((1,)), "0.5", ctx).value + mpmath.log(2)) < 1e-30


def test_lemma_limit():
    a = lemma_limit_check(3, Fraction(1, 10 ** 4))
    b = lemma_limit_check(3, Fraction(1, 2 * 10 ** 4))
    assert abs(a.value) <= 1e-3
    assert abs(lemma_limit_check(2, Fraction(1, 10 ** 5)).value) <= 1e-4
    assert 1.7 < a.value / b.value < 2.3
    with pytest.raises(ValueError):
        lemma_limit_check(1, Fraction(1, 100))


def test_eval_result_validation():
    with pytest.raises(ValueError):
        EvalResult(mpmath.mpf(1), mpmath.mpf(-1), Route.SERIES)
