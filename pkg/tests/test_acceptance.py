"""End-to-end acceptance checks; each prints one PASS/FAIL line."""

import itertools
import random
import time
from collections import Counter
from math import comb

import pytest

from gsbconf.conformal import (
    ConformalAlgebra, LocalityFunction, build_AX, build_MXN, enumerate_normal_words, free_conformal_module,
    is_b0_word, locality_ex_schema,
)
from gsbconf.engine import complete, find_compositions, interreduce, is_trivial
from gsbconf.lie import (
    LieConformalPresentation, Special, build_ALX, envelope, heisenberg_virasoro, hv_order, virasoro,
    virasoro_order,
)
from gsbconf.module import (
    complete_module, module_gsb_check, oracle_dimensions, reduced_module_words, split_null_extension,
)
from gsbconf.poly import Polynomial, RuleSet, replay
from gsbconf.schema import Caps
from gsbconf.words import D, Equal, Greater, L, Less, OrderSpec, R, X, compare, render_word

from conftest import ACCEPTANCE_LINES
from oracles import conformal_letters, naive_less, random_terms, random_word


def report(n, ok, detail, elapsed, limit=None):
    if limit is not None and elapsed >= limit:
        ok = False
        detail += "; over time limit %ds" % limit
    line = "criterion %d: %s %s (%.1fs)" % (n, "PASS" if ok else "FAIL", detail, elapsed)
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_operator_algebra_closed():
    t0 = time.perf_counter()
    spec = OrderSpec(("a",))
    res = complete(RuleSet(spec, families=build_AX(("a",), spec)), Caps(6, 5))
    kinds = Counter(tuple(sorted((e.f, e.g))) + (e.kind,) for e in res.trace)
    ok = (not res.new_rules and res.report.compositions > 0
          and set(kinds) == {("LD", "RL", "intersection")}
          and all(e.outcome == "trivial" for e in res.trace))
    report(1, ok, "%d new rules, %d compositions, kinds %s" % (
        len(res.new_rules), res.report.compositions, dict(kinds)), time.perf_counter() - t0, 10)


def test_criterion_2_extended_locality():
    t0 = time.perf_counter()
    labels = ("a", "b")
    spec = OrderSpec(labels)
    N = LocalityFunction.constant(labels, 2)
    caps = Caps(6, 5)
    res = complete_module(build_MXN(labels, N, spec), caps)
    new = interreduce(res)
    sigma = split_null_extension(free_conformal_module(labels, N, spec))
    # instances whose L_m^b u part is already normal; the others have reducible leading words
    expected = {r.pattern: r.poly for r in locality_ex_schema(labels, N, spec).instances(caps)
                if is_b0_word(r.pattern[1:], N)}
    got = {r.pattern: r.poly for r in new}
    same_words = set(got) == set(expected)
    tails_agree = same_words and all(
        sigma.normal_form(got[w] - Polynomial.word(w)) == sigma.normal_form(expected[w] - Polynomial.word(w))
        for w in got)
    in_ideal = all(not sigma.normal_form(r.poly) for r in res.new_rules)
    ok = same_words and tails_agree and in_ideal and len(got) == len(expected)
    report(2, ok, "%d new rules vs %d in-cap instances, terms agree: %s" % (
        len(got), len(expected), tails_agree), time.perf_counter() - t0, 60)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_criterion_3_normal_words(n):
    t0 = time.perf_counter()
    labels, bound = ("a",), 6
    spec = OrderSpec(labels)
    N = LocalityFunction.constant(labels, n)
    normal = enumerate_normal_words(labels, N, bound, spec)
    closed = split_null_extension(free_conformal_module(labels, N, spec))
    reduced = reduced_module_words(closed, labels, bound, max_index=bound + n)
    o = oracle_dimensions(closed, labels, bound, weights=(-(bound - 1), max(n - 2, 0) * (bound - 1)),
                          r_weight=max(n, 1))
    cum = [sum(len(w) <= d for w in normal) for d in range(1, bound + 1)]
    ok = normal == reduced and o.dimensions == o.reduced_counts == cum
    report(3, ok, "N=%d dims %s" % (n, o.dimensions), time.perf_counter() - t0, 60)


def test_criterion_4_heisenberg_virasoro():
    t0 = time.perf_counter()
    lie, spec = heisenberg_virasoro(), hv_order()
    res = envelope(lie, spec=spec, caps=Caps(6, 5))
    pres = res.presentation
    check = module_gsb_check(pres, Caps(6, 5))
    rules = split_null_extension(pres)
    w = (R(0, "v"), L(0, "h"), X("v"))
    f = rules.match_at(w, 0)
    g = next(r for r in pres.module_rules if r.pattern == w[1:])
    comp = next(c for c in find_compositions(f, g) if c.w == w)
    triv = is_trivial(comp, rules, certify=True)
    cert_ok = triv.trivial and replay(comp.value, triv.certificate) == 0
    basis = reduced_module_words(res.completion.closed, lie.labels, 6, 8)
    expected = {(D,) * s + (L(0, "v"),) * k + (X(a),)
                for s in range(6) for k in range(6 - s) for a in lie.labels}
    ok = bool(check) and cert_ok and set(basis) == expected and len(basis) == len(expected)
    ok = ok and isinstance(res.speciality, Special)
    report(4, ok, "GSB %s over %d compositions, certificate %d steps, basis %d words" % (
        check.is_gsb, check.checked, len(triv.certificate), len(basis)), time.perf_counter() - t0, 60)


def test_criterion_5_virasoro():
    t0 = time.perf_counter()
    lie, spec = virasoro(3), virasoro_order()
    caps = Caps(8, 6)
    res = envelope(lie, spec=spec, caps=caps)
    new = [r.poly for r in res.new_rules]
    target = Polynomial.word((L(2, "v"), L(2, "v"), X("v")))
    before = module_gsb_check(res.presentation, caps, stop_at_first=True)
    full = res.presentation.with_rules(res.new_rules)
    after = module_gsb_check(full, caps)
    rules = split_null_extension(full)
    w = (R(0, "v"), L(2, "v"), L(2, "v"), X("v"))
    f = rules.match_at(w, 0)
    comp = next(c for c in find_compositions(f, res.new_rules[0]) if c.w == w)
    triv = is_trivial(comp, rules, certify=True)
    ok = (new == [target] and not before and bool(after) and triv.trivial
          and replay(comp.value, triv.certificate) == 0 and isinstance(res.speciality, Special))
    report(5, ok, "new rules %s, certificate %d steps, final GSB %s" % (
        [p.render(spec) for p in new], len(triv.certificate), after.is_gsb), time.perf_counter() - t0, 120)


def test_criterion_6_half_pbw():
    t0 = time.perf_counter()
    counts = []
    for lie, spec, caps in [(heisenberg_virasoro(), hv_order(), Caps(6, 5)),
                            (virasoro(3), virasoro_order(), Caps(8, 6))]:
        res = complete(RuleSet(spec, families=build_ALX(lie, spec)), caps)
        counts.append((len(res.new_rules), res.report.compositions))
    ok = all(n == 0 and c > 0 for n, c in counts)
    report(6, ok, "(new rules, compositions) per algebra: %s" % counts, time.perf_counter() - t0, 60)


def test_criterion_7_properties(vir_envelope):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    # (a) compatibility and agreement with the plain definition
    letters = conformal_letters(("v", "h"), 3)
    violations = 0
    for _ in range(10 ** 4):
        spec = rng.choice([hv_order(), OrderSpec(("v", "h"))])
        mod = ("v", "h") if rng.random() < 0.5 else ()
        u, v = random_word(rng, letters, 4, mod), random_word(rng, letters, 4, mod)
        a = random_word(rng, letters, 2)
        b = () if mod else random_word(rng, letters, 2)
        c = compare(spec, u, v)
        expect = Less if naive_less(spec, u, v) else (Greater if naive_less(spec, v, u) else Equal)
        if c != expect:
            violations += 1
        if c != Equal and compare(spec, a + u + b, a + v + b) != c:
            violations += 1
    # (b) normal form after completion
    closed = vir_envelope.completion.closed
    vletters = conformal_letters(("v",), 4)
    nf_bad = 0
    for _ in range(200):
        f = Polynomial(random_terms(rng, vletters, 4, 3, ("v",)))
        g = Polynomial(random_terms(rng, vletters, 4, 3, ("v",)))
        nf = closed.normal_form(f)
        nf_bad += closed.normal_form(nf) != nf
        nf_bad += closed.normal_form(f.scale(3) - g) != nf.scale(3) - closed.normal_form(g)
    # (c) associativity and (d) sesquilinearity and bracket identities on generators
    labels = ("a", "b")
    alg = ConformalAlgebra(labels, LocalityFunction.constant(labels, 2), OrderSpec(labels))
    gen = {c: alg.gen(c) for c in labels}
    assoc_bad = sesq_bad = 0
    for a, b, c in itertools.product(labels, repeat=3):
        for n, m in itertools.product(range(4), repeat=2):
            lhs = alg.product(gen[a], n, alg.product(gen[b], m, gen[c]))
            rhs = Polynomial.zero()
            for s in range(n + 1):
                rhs = rhs + alg.product(alg.product(gen[a], n - s, gen[b]), m + s, gen[c]).scale(comb(n, s))
            assoc_bad += lhs != rhs
            x, y = gen[a], gen[b]
            sesq_bad += alg.product(alg.d(x), n, y) != (alg.product(x, n - 1, y).scale(-n) if n else 0)
            rhs = alg.d(alg.product(x, n, y))
            if n:
                rhs = rhs + alg.product(x, n - 1, y).scale(n)
            sesq_bad += alg.product(x, n, alg.d(y)) != rhs
            # {d x o_n y} = d{x o_n y} + n{x o_(n-1) y}, {x o_n d y} = -n{x o_(n-1) y}
            rhs = alg.d(alg.bracket(x, n, y))
            if n:
                rhs = rhs + alg.bracket(x, n - 1, y).scale(n)
            sesq_bad += alg.bracket(alg.d(x), n, y) != rhs
            sesq_bad += alg.bracket(x, n, alg.d(y)) != (alg.bracket(x, n - 1, y).scale(-n) if n else 0)
            # x o_n {y o_m z} = {(x o_n y) o_m z}
            sesq_bad += alg.product(x, n, alg.bracket(y, m, gen[c])) != alg.bracket(alg.product(x, n, y), m, gen[c])
    ok = violations == 0 and nf_bad == 0 and assoc_bad == 0 and sesq_bad == 0
    report(7, ok, "order violations %d, normal-form failures %d, associativity %d, sesquilinearity %d" % (
        violations, nf_bad, assoc_bad, sesq_bad), time.perf_counter() - t0)


def test_criterion_8_odd_generator():
    t0 = time.perf_counter()
    labels = ("a",)
    lie = LieConformalPresentation(labels, {}, parity={"a": 1})
    spec = OrderSpec(labels)
    comm = next(s for s in build_ALX(lie, spec) if s.name == "CommL")
    anti = comm.instantiate({"n": 2, "m": 0, "a": "a", "b": "a"})
    anti_ok = anti == Polynomial([((L(2, "a"), L(0, "a")), 1), ((L(0, "a"), L(2, "a")), 1)])
    res = envelope(lie, LocalityFunction.constant(labels, 2), spec, Caps(6, 5), bound=4)
    o = oracle_dimensions(res.completion.closed, labels, 4, weights=(-4, 0), r_weight=2)
    words = [render_word(w) for w in res.basis_words]
    ok = anti_ok and not res.completion.report.saturated and o.agrees and o.dimensions[-1] == len(words)
    report(8, ok, "anticommutator %s, dims %s, basis %d words" % (
        anti.render(spec), o.dimensions, len(words)), time.perf_counter() - t0)
