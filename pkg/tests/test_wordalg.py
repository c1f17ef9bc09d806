from itertools import product

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from deszeta.licomb import Zfull
from deszeta.numcore import PrecisionCtx, binom
from deszeta.numeval import licomb_eval
from deszeta.wordalg import EMPTY, FuelExhausted, Word, WordSum, closed_shuffle_depth11, \
    closed_shuffle_depth21, dword, format_word, format_wordsum, index_to_word, parse_word, \
    reduced_coproduct, shuffle0, shuffle0_words, word_normalize, word_to_index

words = st.lists(st.integers(-3, 3), min_size=1, max_size=2).map(lambda e: Word(tuple(e)))


def W(*e):
    return Word(tuple(e))


def test_normalize_examples():
    assert word_normalize("j d y") == WordSum.of(W(0))
    assert not word_normalize("y j")
    assert word_normalize("d d y j y") == WordSum.of(W(-2, 1))


def test_normalize_rejects_unknown_letters():
    with pytest.raises(ValueError):
        word_normalize("x y")


def test_parse_and_format():
    assert parse_word("[1, -2,0]") == W(1, -2, 0)
    assert parse_word("[]") == EMPTY
    assert format_word(W(1, -2)) == "[1,-2]"
    with pytest.raises(ValueError):
        parse_word("1,2")


@given(st.lists(st.integers(-9, 9), max_size=5))
def test_parse_format_roundtrip(e):
    w = Word(tuple(e))
    assert parse_word(format_word(w)) == w


def test_shuffle_examples():
    assert shuffle0_words(W(0), W(0)) == WordSum.of(W(0, 0))
    assert shuffle0_words(W(1), W(1)) == WordSum.of(W(1, 1), 2)
    assert shuffle0_words(W(-1), W(1)) == WordSum({W(-1, 1): 1, W(0, 0): -1})


@given(st.integers(0, 5), st.integers(0, 5))
def test_y_powers_concatenate(a, b):
    assert shuffle0_words(W(*[0] * a), W(*[0] * b)) == WordSum.of(W(*[0] * (a + b)))


@settings(max_examples=15)
@given(words, words)
def test_shuffle_commutative_after_evaluation(u, v):
    # the recursion returns representatives modulo the Leibniz ideal, so
    # commutativity is checked on values
    ctx = PrecisionCtx(128)
    with ctx.workprec():
        t = mpmath.mpf("0.3")
        a, b = _psi(shuffle0_words(u, v), t, ctx), _psi(shuffle0_words(v, u), t, ctx)
        assert abs(a - b) <= mpmath.mpf("1e-25") * max(1, abs(a))


@given(words)
def test_empty_word_is_unit(u):
    assert shuffle0_words(u, EMPTY) == WordSum.of(u)


@given(words, words)
def test_shuffle_preserves_depth(u, v):
    for w, _ in shuffle0_words(u, v):
        assert w.depth == u.depth + v.depth


def test_bilinear_extension():
    a = WordSum({W(1): 2, W(-1): 1})
    b = WordSum.of(W(1))
    assert shuffle0(a, b) == shuffle0_words(W(1), W(1)) * 2 + shuffle0_words(W(-1), W(1))


def test_fuel_exhaustion_is_an_error():
    with pytest.raises(FuelExhausted):
        shuffle0_words(W(7, -6, 5), W(-7, 6), fuel=3)


def test_closed11_examples():
    assert closed_shuffle_depth11(1, 1) == WordSum({W(-1, 1): 1, W(0, 0): -1})
    assert closed_shuffle_depth11(2, 1) == WordSum({W(-2, 1): 1, W(-1, 0): -1, W(0, -1): -1})
    assert closed_shuffle_depth11(1, 2) == WordSum({W(-1, 2): 1, W(0, 1): -1})


def test_closed21_example():
    assert closed_shuffle_depth21(1, 1, 1) == WordSum({W(-1, 1, 1): 2, W(0, 0, 1): -1})


@pytest.mark.parametrize("k, l", list(product(range(1, 6), repeat=2)))
def test_closed11_matches_recursion(k, l):
    assert closed_shuffle_depth11(k, l) == shuffle0_words(dword(k), W(l))


@pytest.mark.parametrize("k, l, m", list(product(range(1, 5), repeat=3)))
def test_closed21_matches_recursion(k, l, m):
    assert closed_shuffle_depth21(k, l, m) == shuffle0_words(W(-k, l), W(m))


@pytest.mark.parametrize("k, l, m", [(k, l, m) for k, l, m in product(range(1, 4), repeat=3) if m <= l])
def test_closed21_literal_range_when_m_le_l(k, l, m):
    assert closed_shuffle_depth21(k, l, m, literal=True) == closed_shuffle_depth21(k, l, m)


def _psi(s: WordSum, t, ctx):
    return sum((c * licomb_eval(Zfull(word_to_index(w)), t, ctx).value for w, c in s), mpmath.mpf(0))


def test_closed21_literal_range_is_incomplete_when_m_gt_l():
    # the terms dropped by stopping at i = l - 1 carry a nonzero value
    ctx = PrecisionCtx(128)
    with ctx.workprec():
        t = mpmath.mpf("0.3")
        lit = closed_shuffle_depth21(1, 1, 2, literal=True)
        raw = shuffle0_words(W(-1, 1), W(2))
        assert lit != raw
        assert raw - lit == WordSum.of(W(0, 1, 1), -2)
        assert abs(_psi(raw, t, ctx) - _psi(lit, t, ctx)) > mpmath.mpf("1e-3")


@pytest.mark.parametrize("k", [0, 1, 3])
def test_coproduct_of_depth_one_is_empty(k):
    assert len(reduced_coproduct(dword(k))) == 0


def test_coproduct_examples():
    assert dict(reduced_coproduct(dword(0, 0))) == {(W(0), W(0)): 2}
    assert dict(reduced_coproduct(dword(1, 0))) == {(W(-1), W(0)): 2, (W(0), W(-1)): 2}


def test_coproduct_rejects_j():
    with pytest.raises(ValueError):
        reduced_coproduct(W(1, 0))


@given(st.lists(st.integers(0, 3), min_size=2, max_size=4))
def test_coproduct_factors_split_depth(k):
    w = dword(*k)
    assert len(reduced_coproduct(w)) > 0
    for (a, b), c in reduced_coproduct(w):
        assert a.depth >= 1 and b.depth >= 1
        assert a.depth + b.depth == w.depth
        assert c > 0


def test_orientation():
    assert word_to_index(W(0)) == (0,)
    assert word_to_index(W(2, 1)) == (1, 2)
    assert word_to_index(W(-1, 1)) == (1, -1)
    assert index_to_word((1, 2)) == W(2, 1)
    with pytest.raises(ValueError):
        word_to_index(Word((1,), tail=1))


def test_format_wordsum():
    assert format_wordsum(shuffle0_words(W(-1), W(1))) == "[-1,1] - [0,0]"
    assert format_wordsum(WordSum()) == "0"
    assert binom(3, 1) == 3
