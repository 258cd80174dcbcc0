"""Universal associative envelopes of Lie conformal (super)algebras.

A Lie conformal algebra is given by generators X, a parity on X and a
lambda-bracket table ``[a_lam b] = sum_c f_c(d, lam) c``.  The operator
algebra A(L;X) adds the commutation relations of the left operators to
A(X); the envelope U(L;X,N) is the A(L;X)-module generated by X subject
to locality, right multiplication and the commutator relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

from .conformal import (
    LocalityFunction,
    build_AX,
    locality_schema,
    right_mul_schema,
)
from .engine import CompletionResult, cap_stable, complete, interreduce
from .module import (
    ModulePresentation,
    module_alphabet,
    reduced_module_words,
    split_null_extension,
)
from .poly import Polynomial, RewriteRule, RuleSet, leading, make_monic
from .schema import Caps, RelationSchema, binom
from .words import D, L, Letter, OrderSpec, R, Token, Word, X, render_word

__all__ = [
    "LieConformalPresentation",
    "lambda_to_coeffs",
    "operator_of",
    "commutation_schema",
    "build_ALX",
    "comm_relations",
    "build_envelope",
    "EnvelopeResult",
    "Special",
    "NotSpecial",
    "Undetermined",
    "envelope",
    "decide_speciality",
    "speciality_search",
    "heisenberg_virasoro",
    "virasoro",
    "hv_order",
    "virasoro_order",
]

# bracket polynomial: {c: {(i, j): coeff}} meaning sum coeff * d^i lam^j c
Bracket = Mapping[str, Mapping[tuple[int, int], object]]


@dataclass
class LieConformalPresentation:
    labels: tuple[str, ...]
    brackets: dict[tuple[str, str], dict[str, dict[tuple[int, int], Fraction]]]
    parity: dict[str, int] = field(default_factory=dict)
    locality: LocalityFunction | None = None

    def __post_init__(self):
        self.labels = tuple(self.labels)
        for a in self.labels:
            self.parity.setdefault(a, 0)
        for (a, b), f in self.brackets.items():
            for x in (a, b, *f):
                if x not in self.labels:
                    raise ValueError(f"undeclared generator {x!r} in bracket [{a},{b}]")

    def p(self, a: str) -> int:
        return self.parity[a] % 2

    def sign(self, a: str, b: str) -> int:
        return -1 if self.p(a) and self.p(b) else 1

    def coeffs(self, a: str, b: str) -> list[Polynomial]:
        return lambda_to_coeffs(self.brackets.get((a, b), {}))


def lambda_to_coeffs(bracket: Bracket) -> list[Polynomial]:
    """``g_n`` as polynomials in words ``d^i c``: n! times the lam^n coefficient."""
    top = max((j for f in bracket.values() for (_, j) in f), default=-1)
    out = [Polynomial.zero() for _ in range(top + 1)]
    for c, f in bracket.items():
        for (i, j), coeff in f.items():
            out[j] = out[j] + Polynomial.word((D,) * i + (X(c),), Fraction(coeff) * factorial(j))
    while out and not out[-1]:
        out.pop()
    return out


def operator_of(g: Polynomial, k: int) -> Polynomial:
    """``L_k^g`` for ``g`` in k[d]X, using ``L_k^{dx} = -k L_{k-1}^x``."""
    out = Polynomial.zero()
    for w, c in g.terms.items():
        i = len(w) - 1
        if i > k:
            continue
        falling = 1
        for t in range(i):
            falling *= k - t
        out = out + Polynomial.word((L(k - i, w[-1].label),), c * (-1) ** i * falling)
    return out


def commutation_schema(lie: LieConformalPresentation, spec: OrderSpec) -> RelationSchema:
    """``L_n^a L_m^b - (-1)^(p(a)p(b)) L_m^b L_n^a - sum_s C(n,s) L^{g_s}_{n+m-s}`` for ``L_n^a > L_m^b``.

    For an odd generator the square ``L_n^a L_n^a`` also gets a relation,
    halved so that it is monic.
    """
    table = {(a, b): lie.coeffs(a, b) for a in lie.labels for b in lie.labels}

    def build(asg):
        n, m, a, b = asg["n"], asg["m"], asg["a"], asg["b"]
        sign = lie.sign(a, b)
        p = Polynomial([((L(n, a), L(m, b)), 1), ((L(m, b), L(n, a)), -sign)])
        for s, g in enumerate(table[(a, b)]):
            if s <= n and g:
                p = p - operator_of(g, n + m - s).scale(binom(n, s))
        if (n, a) == (m, b):
            p = p.scale(Fraction(1, 2))
        return p

    def ok(asg):
        x, y = L(asg["n"], asg["a"]), L(asg["m"], asg["b"])
        if x == y:
            return lie.p(asg["a"]) == 1
        return spec.letter_key(x) > spec.letter_key(y)

    return RelationSchema("CommL", (("L", "n", "a"), ("L", "m", "b")), build, spec, lie.labels,
                          ("n", "m"), ("a", "b"), constraint=ok)


def build_ALX(lie: LieConformalPresentation, spec: OrderSpec) -> list[RelationSchema]:
    return build_AX(lie.labels, spec) + [commutation_schema(lie, spec)]


def comm_relations(lie: LieConformalPresentation, N: LocalityFunction) -> list[Polynomial]:
    """``L_n^a b - (-1)^(p(a)p(b)) R_n^a b - g_n^{a,b}`` for every n where some term survives."""
    out = []
    for a in lie.labels:
        for b in lie.labels:
            g = lie.coeffs(a, b)
            top = max(N(a, b), N(b, a), len(g))
            for n in range(top):
                p = Polynomial([((L(n, a), X(b)), 1), ((R(n, a), X(b)), -lie.sign(a, b))])
                if n < len(g):
                    p = p - g[n]
                out.append(p)
    return out


def _interreduce(polys: Iterable[Polynomial], base: RuleSet, name: str) -> list[RewriteRule]:
    """Repeatedly admit the reduced polynomial with the smallest leading word."""
    spec = base.spec
    rules = base.copy()
    pending = list(polys)
    admitted: list[RewriteRule] = []
    while True:
        reduced = [q for q in (rules.normal_form(p) for p in pending) if q]
        if not reduced:
            break
        reduced.sort(key=lambda q: spec.key(leading(q, spec)[0]))
        first = make_monic(reduced[0], spec)
        r = RewriteRule(leading(first, spec)[0], first, "%s%d" % (name, len(admitted) + 1))
        rules.add(r)
        admitted.append(r)
        pending = reduced[1:]
    # tails may have become reducible by later admissions
    out = []
    for r in admitted:
        others = RuleSet(spec, [x for x in admitted if x is not r], base.families, base.annihilate)
        tail = others.normal_form(r.poly - Polynomial.word(r.pattern))
        out.append(RewriteRule(r.pattern, Polynomial.word(r.pattern) + tail, r.name))
    return out


def build_envelope(lie: LieConformalPresentation, N: LocalityFunction,
                   spec: OrderSpec) -> ModulePresentation:
    """Module presentation of U(L;X,N) over A(L;X) with the commutator rules pre-reduced."""
    algebra = build_ALX(lie, spec)
    base = ModulePresentation(spec, lie.labels, algebra_families=algebra,
                              module_families=[locality_schema(lie.labels, N, spec),
                                               right_mul_schema(lie.labels, N, spec)])
    rules = _interreduce(comm_relations(lie, N), split_null_extension(base), "Comm")
    return base.with_rules(rules)


# ---------------------------------------------------------------------------
# speciality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Special:
    def __str__(self) -> str:
        return "Special"


@dataclass(frozen=True)
class NotSpecial:
    witness: RewriteRule

    def __str__(self) -> str:
        return "NotSpecial(%s)" % self.witness.poly.render(None)


@dataclass(frozen=True)
class Undetermined:
    reason: str

    def __str__(self) -> str:
        return "Undetermined(%s)" % self.reason


@dataclass
class EnvelopeResult:
    presentation: ModulePresentation
    completion: CompletionResult
    closed_rules: list[RewriteRule]
    basis_words: list[Word]
    stable: bool | None = None
    speciality: object = None

    @property
    def new_rules(self) -> list[RewriteRule]:
        """Interreduced rules added by completion."""
        return self.closed_rules[len(self.presentation.module_rules):]


def _is_dx(w: Word) -> bool:
    return len(w) >= 1 and w[-1].kind == "x" and all(l.kind == "d" for l in w[:-1])


def decide_speciality(result: EnvelopeResult):
    """NotSpecial if some module rule lies in k[d]X; Special only for a clean, unsaturated run."""
    for r in result.closed_rules:
        if all(_is_dx(w) for w in r.poly.terms):
            return NotSpecial(r)
    report = result.completion.report
    if report.saturated:
        return Undetermined(report.render())
    if result.stable is False:
        return Undetermined("not cap-stable")
    return Special()


def envelope(lie: LieConformalPresentation, N: LocalityFunction | None = None,
             spec: OrderSpec | None = None, caps: Caps = Caps(), bound: int = 0,
             check_stable: bool = False, relations: Iterable[Polynomial] = ()) -> EnvelopeResult:
    """Build U(L;X,N), complete it within caps and classify speciality.

    ``relations`` are extra module relations imposed on top of the envelope.
    """
    N = N or lie.locality
    if N is None:
        raise ValueError("no locality function given")
    spec = spec or OrderSpec(lie.labels)
    pres = build_envelope(lie, N, spec)
    extra = [RewriteRule.from_poly(q, spec, "S%d" % (i + 1)) for i, q in enumerate(relations) if q]
    if extra:
        pres = pres.with_rules(extra)
    rules = split_null_extension(pres)
    alphabet = module_alphabet(lie.labels, caps)
    result = complete(rules, caps, alphabet)
    closed = list(pres.module_rules) + interreduce(result)
    basis = reduced_module_words(result.closed, lie.labels, bound, caps.max_index) if bound else []
    stable = None
    if check_stable:
        stable = cap_stable(rules, caps, lambda c: module_alphabet(lie.labels, c))
    out = EnvelopeResult(pres, result, closed, basis, stable)
    out.speciality = decide_speciality(out)
    return out


def speciality_search(lie: LieConformalPresentation, max_locality: int, spec: OrderSpec | None = None,
                      caps: Caps = Caps()) -> list[tuple[LocalityFunction, object]]:
    """Try every N with values in [0, max_locality]; stops at the first Special one."""
    pairs = [(a, b) for a in lie.labels for b in lie.labels]
    tried = []
    for values in itertools.product(range(max_locality + 1), repeat=len(pairs)):
        N = LocalityFunction(lie.labels, dict(zip(pairs, values)))
        verdict = envelope(lie, N, spec, caps).speciality
        tried.append((N, verdict))
        if isinstance(verdict, Special):
            break
    return tried


# ---------------------------------------------------------------------------
# worked examples
# ---------------------------------------------------------------------------

def heisenberg_virasoro() -> LieConformalPresentation:
    """Virasoro with a current h: [v v] = (d+2lam)v, [v h] = (d+lam)h, [h v] = lam h."""
    return LieConformalPresentation(
        ("v", "h"),
        {("v", "v"): {"v": {(1, 0): 1, (0, 1): 2}},
         ("v", "h"): {"h": {(1, 0): 1, (0, 1): 1}},
         ("h", "v"): {"h": {(0, 1): 1}}},
        locality=LocalityFunction(("v", "h"), {("v", "v"): 2, ("h", "v"): 2,
                                               ("v", "h"): 1, ("h", "h"): 0}))


def hv_order() -> OrderSpec:
    """Every L^h above every L^v."""
    return OrderSpec(("v", "h"), (Token("d"), Token("L", None, "v"), Token("L", None, "h"), Token("R")))


def virasoro(N: int = 3) -> LieConformalPresentation:
    return LieConformalPresentation(
        ("v",), {("v", "v"): {"v": {(1, 0): 1, (0, 1): 2}}},
        locality=LocalityFunction.constant(("v",), N))


def virasoro_order() -> OrderSpec:
    """``L_0 < L_1 < d < L_2 < ... < R_0 < R_1 < ...`` with R-degree ranked first."""
    return OrderSpec(("v",), (Token("L", 0), Token("L", 1), Token("d"), Token("L"), Token("R")))
