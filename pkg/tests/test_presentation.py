from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsbconf.lie import heisenberg_virasoro, hv_order
from gsbconf.poly import Polynomial
from gsbconf.presentation import (
    TASKS, ParseError, PresentationFile, parse, parse_bracket, parse_polynomial, render, render_bracket,
)
from gsbconf.schema import Caps
from gsbconf.words import D, L, X

PRES = Path(__file__).resolve().parent.parent / "presentations"


def test_parse_hv_file():
    p = parse((PRES / "hv.pres").read_text())
    lie = heisenberg_virasoro()
    assert p.labels == ("v", "h")
    assert p.N() == lie.locality
    assert p.lie().brackets == lie.brackets
    assert p.spec().precedence == hv_order().precedence
    assert p.caps == Caps(6, 5) and p.task == "speciality" and p.bound == 6


def test_parse_bracket():
    assert parse_bracket("(d + 2*lam) v", ("v",)) == {"v": {(1, 0): 1, (0, 1): 2}}
    assert parse_bracket("lam^2/2 h - d h", ("v", "h")) == {"h": {(0, 2): Fraction(1, 2), (1, 0): -1}}
    assert parse_bracket("d lam v + lam d v", ("v",)) == {"v": {(1, 1): 2}}
    assert parse_bracket("0", ("v",)) == {}
    assert parse_bracket("(d + lam) v - d v - lam v", ("v",)) == {}


def test_render_bracket_round_trip():
    f = {"v": {(1, 0): Fraction(1), (0, 1): Fraction(2)}, "h": {(2, 3): Fraction(-1, 3)}}
    assert parse_bracket(render_bracket(f, ("v", "h")), ("v", "h")) == f


def test_parse_polynomial():
    p = parse_polynomial("d L{2}[v] v - 2*L{1}[v] v + 2*v", ("v",))
    assert p == Polynomial([((D, L(2, "v"), X("v")), 1), ((L(1, "v"), X("v")), -2), ((X("v"),), 2)])


def _error(text):
    with pytest.raises(ParseError) as e:
        parse(text)
    return e.value


def test_error_no_generators():
    assert "no generators" in str(_error("[generators]\n"))


def test_error_undeclared_generator():
    e = _error("[generators]\nlabels = a\n\n[locality]\na,b = 1\n")
    assert (e.line, e.col) == (5, 3) and "undeclared generator 'b'" in e.message
    assert str(e).startswith("line 5:3:")


def test_error_negative_locality():
    e = _error("[generators]\nlabels = a\n[locality]\na,a = -1\n")
    assert e.line == 4 and "negative locality" in e.message


def test_error_bracket_position():
    e = _error("[generators]\nlabels = v\n[brackets]\n[v,v] = (d + 2*lam) w\n")
    assert e.line == 4 and e.col == 21


def test_error_unknown_section_and_task():
    assert _error("[nonsense]\n").line == 1
    assert "unknown task" in _error("[generators]\nlabels = a\n[task]\ntask = fly\n").message


def test_error_precedence_coverage():
    e = _error("[generators]\nlabels = a\n[order]\nprecedence = d < L*\n")
    assert "'R'" in e.message


def test_locality_defaults_to_zero():
    p = parse("[generators]\nlabels = a, b\n[locality]\na,a = 2\n")
    assert p.N()("a", "b") == 0 and p.N()("a", "a") == 2


def test_presentation_files_round_trip():
    for f in sorted(PRES.glob("*.pres")):
        p = parse(f.read_text())
        assert parse(render(p)) == p


labels_st = st.lists(st.sampled_from(["a", "b", "c", "v", "h"]), min_size=1, max_size=3, unique=True)
coeff_st = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)


@st.composite
def presentations(draw):
    labels = tuple(draw(labels_st))
    pairs = [(a, b) for a in labels for b in labels]
    locality = {pq: draw(st.integers(0, 4)) for pq in pairs}
    brackets = {}
    for pq in draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))):
        c = draw(st.sampled_from(labels))
        terms = draw(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), coeff_st,
                                     min_size=1, max_size=3))
        brackets[pq] = {c: terms}
    parity = {a: draw(st.integers(0, 1)) for a in labels}
    caps = Caps(draw(st.integers(0, 10)), draw(st.integers(1, 8)), draw(st.integers(0, 4)))
    return PresentationFile(labels, parity, locality, brackets, caps=caps,
                            task=draw(st.sampled_from(TASKS)), bound=draw(st.integers(0, 7)))


@settings(max_examples=100, deadline=None)
@given(presentations())
def test_render_parse_round_trip(p):
    assert parse(render(p)) == p
