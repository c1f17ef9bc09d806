from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from deszeta.series import MultiSeries, PoleOrderError, TruncatedLaurent, TruncationError, \
    expand_exp, expand_g, laurent_dz, laurent_mul, mv_substitute_sum

Z = TruncatedLaurent.monomial


def laurents(order=5):
    coeffs = st.dictionaries(st.integers(-2, order), st.fractions(-10, 10, max_denominator=6), max_size=5)
    return coeffs.map(lambda c: TruncatedLaurent(c, order))


def test_multiply_monomial():
    a = TruncatedLaurent({-1: 1, 0: 1}, 4)
    out = a * Z(1, 1, 5)
    assert out.coeffs == {0: 1, 1: 1}


def test_g_squared_constant_term():
    g = expand_g(6)
    assert (g * g).constant_term() == Fraction(1, 4)


def test_order_of_product():
    a, b = expand_g(5), expand_exp(5)
    assert (a * b).order == 5


def test_order_with_poles():
    a = TruncatedLaurent({-2: 1}, 4)
    b = expand_g(4)
    assert (a * b).order == 2


def test_pole_cap():
    with pytest.raises(PoleOrderError):
        TruncatedLaurent({-3: 1}, 0, pole_cap=2)
    a = TruncatedLaurent({-2: 1}, 0, pole_cap=3)
    with pytest.raises(PoleOrderError):
        laurent_mul(a, a)


def test_dz_examples():
    assert laurent_dz(TruncatedLaurent({2: 1}, 5)).coeffs == {1: 2}
    assert laurent_dz(TruncatedLaurent({-1: 1}, 5)).coeffs == {-2: -1}
    assert laurent_dz(expand_g(4)).constant_term() == Fraction(-1, 6)


@pytest.mark.parametrize("n, expected", [(0, Fraction(-1, 2)), (1, Fraction(-1, 6)), (2, 0)])
def test_g_coefficients(n, expected):
    assert expand_g(6)[n] == expected


@pytest.mark.parametrize("k", range(0, 16))
def test_g_against_riemann_zeta(k):
    # k! [z^k] g = (1 + k) zeta(-k)
    c = expand_g(16)[k]
    with mpmath.workdps(50):
        want = (1 + k) * mpmath.zeta(-k) / mpmath.factorial(k)
        assert abs(mpmath.mpf(c.numerator) / c.denominator - want) < mpmath.mpf(10) ** -45


@given(laurents(), laurents(), laurents())
def test_ring_axioms(a, b, c):
    assert ((a * b) * c).agrees_with(a * (b * c))
    assert (a * (b + c)).agrees_with(a * b + a * c)
    assert (a * b).agrees_with(b * a)


@given(laurents(), laurents())
def test_leibniz(a, b):
    lhs = laurent_dz(a * b)
    rhs = laurent_dz(a) * b + a * laurent_dz(b)
    assert lhs.agrees_with(rhs)


def test_substitute_square():
    f = TruncatedLaurent({2: 1}, 4)
    s = mv_substitute_sum(f, [0, 1], 2, 4)
    assert s.coefficient((2, 0)) == 1
    assert s.coefficient((1, 1)) == 2
    assert s.coefficient((0, 2)) == 1


def test_substitute_g():
    g = expand_g(6)
    assert mv_substitute_sum(g, [0], 1, 6).coefficient((0,)) == Fraction(-1, 2)
    prod = mv_substitute_sum(g, [1], 2, 6) * mv_substitute_sum(g, [0, 1], 2, 6)
    assert prod.coefficient((0, 0)) == Fraction(1, 4)


def test_substitute_rejects_poles_and_short_series():
    with pytest.raises(ValueError):
        mv_substitute_sum(TruncatedLaurent({-1: 1}, 4), [0], 1, 2)
    with pytest.raises(TruncationError):
        mv_substitute_sum(expand_g(2), [0], 1, 4)


def test_multiseries_one():
    one = MultiSeries.one(2, 3)
    assert one.coefficient((0, 0)) == 1
    assert one.first_difference(one) is None
