import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsbconf.lie import hv_order, virasoro_order
from gsbconf.words import (
    AlphabetError, D, Equal, Greater, L, Less, OrderSpec, P, R, ShapeError, Token, X,
    compare, compare_module_words, concat, parse_word, render_word,
)

from oracles import conformal_letters, naive_less, random_word

SPEC = OrderSpec(("a", "b"))


def test_d_below_left_ops():
    assert compare(SPEC, (D,), (L(0, "a"),)) == Less


def test_reflexive():
    u = (D, L(2, "a"), R(1, "b"))
    assert compare(SPEC, u, u) == Equal


def test_virasoro_interleaving():
    assert compare(virasoro_order(), (L(1, "v"),), (D,)) == Less
    assert compare(virasoro_order(), (D,), (L(2, "v"),)) == Less


def test_hv_every_h_above_v():
    spec = hv_order()
    assert compare(spec, (L(0, "h"),), (L(9, "v"),)) == Greater


def test_module_words_prefix_first():
    assert compare_module_words(SPEC, (L(0, "a"), X("a")), (L(1, "a"), X("a"))) == Less
    assert compare_module_words(SPEC, (L(0, "a"), X("a")), (L(0, "a"), X("b"))) == Less


def test_operator_words_below_module_words():
    assert compare(SPEC, (R(0, "a"),), (L(0, "a"), X("a"))) == Less
    assert compare(SPEC, (R(5, "a"),) * 4, (X("a"),)) == Less


def test_module_shape_error():
    with pytest.raises(ShapeError):
        compare_module_words(SPEC, (L(0, "a"),), (X("a"),))


def test_unknown_label():
    with pytest.raises(AlphabetError):
        compare(SPEC, (L(0, "z"),), (D,))
    with pytest.raises(AlphabetError):
        compare(SPEC, (P("q"),), (D,))


def test_concat():
    v = (L(2, "a"),)
    assert concat((), v) == v
    assert concat((D,), v) == (D, L(2, "a"))
    letters = [D, L(0, "a"), R(1, "b")]
    words = [w for k in range(4) for w in itertools.product(letters, repeat=k)]
    sample = random.Random(1).sample(words, 30)
    for u, v, w in itertools.product(sample[:10], sample[10:20], sample[20:]):
        assert concat(u, concat(v, w)) == concat(concat(u, v), w)


def test_rank_dominance():
    rng = random.Random(7)
    letters = conformal_letters(("a", "b"), 4)
    for _ in range(500):
        u, v = random_word(rng, letters, 6), random_word(rng, letters, 6)
        ru, rv = sum(l.kind == "R" for l in u), sum(l.kind == "R" for l in v)
        if ru > rv:
            assert compare(SPEC, u, v) == Greater


def test_matches_naive_definition():
    rng = random.Random(3)
    letters = conformal_letters(("a", "b"), 3)
    for spec in (SPEC, OrderSpec(("a", "b"), (Token("L", 0), Token("d"), Token("L"), Token("R")))):
        for _ in range(2000):
            mod = ("a", "b") if rng.random() < 0.5 else ()
            u = random_word(rng, letters, 5, mod)
            v = random_word(rng, letters, 5, mod if rng.random() < 0.8 else ())
            expect = Less if naive_less(spec, u, v) else (Greater if naive_less(spec, v, u) else Equal)
            assert compare(spec, u, v) == expect
            assert (expect == Equal) == (u == v)


def test_from_text():
    spec = OrderSpec.from_text(("v",), "L{0} < L{1} < d < L* < R*")
    assert spec.precedence == virasoro_order().precedence
    assert Token.parse("L*[v]") == Token("L", None, "v")
    with pytest.raises(ValueError):
        Token.parse("Q7")


def test_render_parse_round_trip():
    w = (D, D, L(3, "a"), R(0, "b"), X("a"))
    text = render_word(w)
    assert text == "d^2 L{3}[a] R{0}[b] a"
    assert parse_word(text, ("a", "b")) == w
    assert render_word(()) == "1"


letters_st = st.sampled_from(conformal_letters(("a", "b"), 3))
words_st = st.lists(letters_st, max_size=5).map(tuple)


@settings(max_examples=300, deadline=None)
@given(words_st, words_st, words_st, words_st)
def test_compatibility_property(u, v, w, z):
    if compare(SPEC, u, v) == Less:
        assert compare(SPEC, w + u + z, w + v + z) == Less


@settings(max_examples=300, deadline=None)
@given(words_st, words_st)
def test_totality_property(u, v):
    a, b = compare(SPEC, u, v), compare(SPEC, v, u)
    assert a == -b
    assert (a == Equal) == (u == v)


fractions_st = st.fractions(max_denominator=50).filter(lambda x: x != 0)


@given(fractions_st, fractions_st, fractions_st)
def test_scalar_field_axioms(a, b, c):
    assert a * (1 / a) == 1
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert Fraction(a.numerator * 6, a.denominator * 6).denominator == a.denominator
