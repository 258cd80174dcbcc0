from fractions import Fraction

import pytest

from gsbconf.conformal import (
    LocalityFunction, b0_words, is_b0_word, locality_ex_schema, locality_schema, right_mul_schema,
    right_mul_terms,
)
from gsbconf.lie import hv_order
from gsbconf.poly import Polynomial
from gsbconf.schema import (
    Caps, InadmissibleAssignment, RelationSchema, SchemaError, binom, divided_power, instantiate,
)
from gsbconf.words import D, L, OrderSpec, R, X

from oracles import locality_ex_by_hand, right_mul_by_hand

HV_N = LocalityFunction(("v", "h"), {("v", "v"): 2, ("h", "v"): 2, ("v", "h"): 1, ("h", "h"): 0})


def test_right_mul_hv_instance():
    s = right_mul_schema(("v", "h"), HV_N, hv_order())
    p = instantiate(s, {"n": 1, "b": "v", "a": "h"})
    assert p == Polynomial([((R(1, "v"), X("h")), 1), ((L(1, "h"), X("v")), 1)])


def test_right_mul_empty_sum():
    s = right_mul_schema(("v", "h"), HV_N, hv_order())
    assert instantiate(s, {"n": 3, "b": "v", "a": "v"}) == Polynomial.word((R(3, "v"), X("v")))
    assert right_mul_terms(0, "h", "h", HV_N) == 0


def test_right_mul_matches_hand_expansion():
    N = LocalityFunction.constant(("a", "b"), 4)
    s = right_mul_schema(("a", "b"), N, OrderSpec(("a", "b")))
    for n in range(6):
        for a in "ab":
            for b in "ab":
                got = s.instantiate({"n": n, "b": b, "a": a})
                assert got == Polynomial(right_mul_by_hand(n, b, a, 4).items())


def test_locality_ex_instance():
    N = LocalityFunction.constant(("a", "b"), 2)
    s = locality_ex_schema(("a", "b"), N, OrderSpec(("a", "b")))
    u = (X("a"),)
    p = s.instantiate({"n": 2, "m": 0, "a": "a", "b": "b", "u": u})
    assert p == Polynomial([((L(2, "a"), L(0, "b"), X("a")), 1), ((L(1, "a"), L(1, "b"), X("a")), -2),
                            ((L(0, "a"), L(2, "b"), X("a")), 1)])
    assert p == Polynomial(locality_ex_by_hand(2, 0, "a", "b", u).items())


def test_locality_ex_inadmissible():
    N = LocalityFunction.constant(("a", "b"), 2)
    s = locality_ex_schema(("a", "b"), N, OrderSpec(("a", "b")))
    with pytest.raises(InadmissibleAssignment):
        s.instantiate({"n": 1, "m": 0, "a": "a", "b": "b", "u": (X("a"),)})
    with pytest.raises(InadmissibleAssignment):
        s.instantiate({"n": 2, "m": 0, "a": "a", "b": "b", "u": (D, X("a"))})
    with pytest.raises(InadmissibleAssignment):
        s.instantiate({"n": -1, "m": 0, "a": "a", "b": "b", "u": (X("a"),)})
    with pytest.raises(InadmissibleAssignment):
        s.instantiate({"n": 2, "m": 0, "a": "z", "b": "b", "u": (X("a"),)})


def test_schema_error_on_wrong_lead():
    spec = OrderSpec(("a",))
    bad = RelationSchema("bad", (("L", "n", "a"),),
                         lambda asg: Polynomial([((L(asg["n"], "a"),), 1), ((R(0, "a"),), 1)]),
                         spec, ("a",), ("n",))
    with pytest.raises(SchemaError):
        bad.rule({"n": 0})


def test_match_and_instances():
    N = LocalityFunction.constant(("a",), 2)
    s = locality_schema(("a",), N, OrderSpec(("a",)))
    w = (D, L(3, "a"), X("a"))
    r = s.match(w, 1)
    assert r is not None and r.pattern == w[1:] and r.poly == Polynomial.word(w[1:])
    assert s.match((L(1, "a"), X("a")), 0) is None
    inst = s.instances(Caps(5, 6))
    assert [r.pattern[0].index for r in inst] == [2, 3, 4, 5]


def test_locality_ex_instances_use_b0_tails():
    N = LocalityFunction.constant(("a",), 2)
    s = locality_ex_schema(("a",), N, OrderSpec(("a",)))
    caps = Caps(2, 4)
    inst = s.instances(caps)
    tails = {r.pattern[2:] for r in inst}
    assert tails == set(b0_words(("a",), N, 2))
    assert all(is_b0_word(t, N) for t in tails)
    # n in {2}, m in {0,1,2}, tails: a, L0 a, L1 a
    assert len(inst) == 3 * 3


def test_helpers():
    assert binom(5, 2) == 10 and binom(2, 5) == 0 and binom(-1, 0) == 0
    assert divided_power(3) == Polynomial.word((D, D, D), Fraction(1, 6))
    assert divided_power(0) == Polynomial.word(())
    assert Caps(2, 3).admits((L(2, "a"), D, X("a")))
    assert not Caps(2, 3).admits((L(3, "a"), X("a")))
    assert not Caps(2, 2).admits((D, D, X("a")))
