"""Free associative conformal algebras as modules over the operator algebra A(X).

The module M(X, N) is generated by the alphabet X over the algebra with
letters ``d``, ``L{n}[a]`` (left product by ``a``) and ``R{n}[a]``.  Its
closed rule set consists of the locality relations, the right-multiplication
relations and the extended locality relations; reduced words are exactly
the normal words ``d^s L{n1}[a1] ... L{nk}[ak] c`` with every index below
the locality bound of the following letter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .module import GSBCheck, ModulePresentation, module_gsb_check, split_null_extension
from .poly import Polynomial, RewriteRule, RuleSet
from .schema import Caps, RelationSchema, binom, divided_power
from .words import D, L, Letter, OrderSpec, R, Word, X, render_word

__all__ = [
    "CapExceeded",
    "LocalityFunction",
    "NormalWord",
    "is_b0_word",
    "b0_words",
    "commutation_schemas",
    "build_AX",
    "locality_schema",
    "right_mul_schema",
    "locality_ex_schema",
    "build_MXN",
    "sigma_XN",
    "free_conformal_module",
    "enumerate_normal_words",
    "ConformalAlgebra",
    "conformal_product",
    "conformal_gsb_check",
]


class CapExceeded(ValueError):
    """An intermediate index outgrew the configured cap."""


class LocalityFunction:
    """Total map X × X → Z+; not assumed symmetric."""

    def __init__(self, labels: Sequence[str], values: Mapping[tuple[str, str], int]):
        self.labels = tuple(labels)
        table = {}
        for a in self.labels:
            for b in self.labels:
                if (a, b) not in values:
                    raise ValueError(f"locality N({a},{b}) missing")
                n = int(values[(a, b)])
                if n < 0:
                    raise ValueError(f"negative locality N({a},{b}) = {n}")
                table[(a, b)] = n
        self.table = table

    @classmethod
    def constant(cls, labels: Sequence[str], n: int) -> "LocalityFunction":
        return cls(labels, {(a, b): n for a in labels for b in labels})

    def __call__(self, a: str, b: str) -> int:
        return self.table[(a, b)]

    def max(self) -> int:
        return max(self.table.values(), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, LocalityFunction) and self.table == other.table

    def __repr__(self) -> str:
        body = ", ".join("%s,%s=%d" % (a, b, n) for (a, b), n in self.table.items())
        return f"LocalityFunction({body})"


@dataclass(frozen=True)
class NormalWord:
    s: int
    left_ops: tuple[tuple[int, str], ...]
    tail: str

    def to_word(self) -> Word:
        return (D,) * self.s + tuple(L(n, a) for n, a in self.left_ops) + (X(self.tail),)

    @classmethod
    def from_word(cls, w: Word) -> "NormalWord":
        s = 0
        while s < len(w) and w[s].kind == "d":
            s += 1
        ops = w[s:-1]
        if not w or w[-1].kind != "x" or any(l.kind != "L" for l in ops):
            raise ValueError(f"{render_word(w)} is not of the form d^s L...L c")
        return cls(s, tuple((l.index, l.label) for l in ops), w[-1].label)

    def is_normal(self, N: LocalityFunction) -> bool:
        labs = [a for _, a in self.left_ops] + [self.tail]
        return all(n < N(a, labs[i + 1]) for i, (n, a) in enumerate(self.left_ops))

    def __str__(self) -> str:
        return render_word(self.to_word())


def is_b0_word(u: Word, N: LocalityFunction) -> bool:
    """``L{n1}[a1] ... L{nk}[ak] c`` with every index below the next letter's bound."""
    if not u or u[-1].kind != "x":
        return False
    if any(l.kind != "L" for l in u[:-1]):
        return False
    for i in range(len(u) - 1):
        l = u[i]
        if l.index >= N(l.label, u[i + 1].label):
            return False
    return True


def b0_words(labels: Sequence[str], N: LocalityFunction, max_len: int) -> list[Word]:
    out: list[Word] = []
    layer = [(X(c),) for c in labels]
    for _ in range(max_len):
        out.extend(layer)
        nxt = []
        for u in layer:
            b = u[0].label
            for a in labels:
                for n in range(N(a, b)):
                    nxt.append((L(n, a),) + u)
        layer = nxt
    return out


# ---------------------------------------------------------------------------
# A(X): commutation with d and between L and R
# ---------------------------------------------------------------------------

def _gt(spec: OrderSpec, x: Letter, y: Letter) -> bool:
    return spec.letter_key(x) > spec.letter_key(y)


def _d_commutation(kind: str, name: str, labels, spec: OrderSpec) -> list[RelationSchema]:
    """``X_n d - d X_n - n X_{n-1}``, oriented so the larger word leads."""

    def poly(asg, sign):
        n, a = asg["n"], asg["a"]
        terms = [((Letter(kind, n, a), D), sign), ((D, Letter(kind, n, a)), -sign)]
        if n:
            terms.append(((Letter(kind, n - 1, a),), -sign * n))
        return Polynomial(terms)

    letter_first = RelationSchema(
        name, ((kind, "n", "a"), ("d", None, None)),
        lambda asg: poly(asg, 1), spec, tuple(labels), ("n",), ("a",),
        constraint=lambda asg: _gt(spec, Letter(kind, asg["n"], asg["a"]), D))
    d_first = RelationSchema(
        name, (("d", None, None), (kind, "n", "a")),
        lambda asg: poly(asg, -1), spec, tuple(labels), ("n",), ("a",),
        constraint=lambda asg: _gt(spec, D, Letter(kind, asg["n"], asg["a"])))
    return [letter_first, d_first]


def _rl_commutation(labels, spec: OrderSpec) -> list[RelationSchema]:
    def poly(asg):
        return Polynomial([((R(asg["m"], asg["b"]), L(asg["n"], asg["a"])), 1),
                           ((L(asg["n"], asg["a"]), R(asg["m"], asg["b"])), -1)])

    r_first = RelationSchema(
        "RL", (("R", "m", "b"), ("L", "n", "a")), poly, spec, tuple(labels),
        ("m", "n"), ("b", "a"),
        constraint=lambda asg: _gt(spec, R(asg["m"], asg["b"]), L(asg["n"], asg["a"])))
    l_first = RelationSchema(
        "RL", (("L", "n", "a"), ("R", "m", "b")), lambda asg: poly(asg).scale(-1), spec,
        tuple(labels), ("m", "n"), ("b", "a"),
        constraint=lambda asg: _gt(spec, L(asg["n"], asg["a"]), R(asg["m"], asg["b"])))
    return [r_first, l_first]


def commutation_schemas(labels, spec: OrderSpec) -> list[RelationSchema]:
    return (_d_commutation("L", "LD", labels, spec) + _d_commutation("R", "RD", labels, spec)
            + _rl_commutation(labels, spec))


def build_AX(labels: Sequence[str], spec: OrderSpec) -> list[RelationSchema]:
    """Defining relations of A(X) as families over all indices."""
    return commutation_schemas(labels, spec)


# ---------------------------------------------------------------------------
# M(X, N)
# ---------------------------------------------------------------------------

def locality_schema(labels, N: LocalityFunction, spec: OrderSpec) -> RelationSchema:
    return RelationSchema(
        "Locality", (("L", "n", "a"), ("x", None, "b")),
        lambda asg: Polynomial.word((L(asg["n"], asg["a"]), X(asg["b"]))),
        spec, tuple(labels), ("n",), ("a", "b"),
        constraint=lambda asg: asg["n"] >= N(asg["a"], asg["b"]))


def right_mul_terms(n: int, b: str, a: str, N: LocalityFunction) -> Polynomial:
    """``{a o_n b}`` in terms of left products: sum of (-1)^(n+s) d^(s) L_{n+s}^a b."""
    out = Polynomial.zero()
    for s in range(N(a, b) - n):
        sign = -1 if (n + s) % 2 else 1
        out = out + divided_power(s).rmul((L(n + s, a), X(b))).scale(sign)
    return out


def right_mul_schema(labels, N: LocalityFunction, spec: OrderSpec) -> RelationSchema:
    def build(asg):
        n, b, a = asg["n"], asg["b"], asg["a"]
        return Polynomial.word((R(n, b), X(a))) - right_mul_terms(n, b, a, N)

    return RelationSchema(
        "RightMul", (("R", "n", "b"), ("x", None, "a")), build, spec, tuple(labels),
        ("n",), ("b", "a"))


def locality_ex_schema(labels, N: LocalityFunction, spec: OrderSpec) -> RelationSchema:
    def build(asg):
        n, m, a, b, u = asg["n"], asg["m"], asg["a"], asg["b"], tuple(asg["u"])
        terms = [((L(n, a), L(m, b)) + u, 1)]
        for q in range(1, n + 1):
            terms.append(((L(n - q, a), L(m + q, b)) + u, (-1) ** q * comb(n, q)))
        return Polynomial(terms)

    return RelationSchema(
        "LocalityEx", (("L", "n", "a"), ("L", "m", "b")), build, spec, tuple(labels),
        ("n", "m"), ("a", "b"),
        constraint=lambda asg: asg["n"] >= N(asg["a"], asg["b"]),
        tail_var="u",
        tail_ok=lambda u: is_b0_word(u, N),
        tail_words=lambda room: b0_words(labels, N, room))


def build_MXN(labels: Sequence[str], N: LocalityFunction, spec: OrderSpec,
              algebra: list | None = None) -> ModulePresentation:
    """Defining relations of M(X, N): locality and right multiplication over A(X)."""
    return ModulePresentation(
        spec, tuple(labels),
        algebra_families=list(algebra) if algebra is not None else build_AX(labels, spec),
        module_families=[locality_schema(labels, N, spec), right_mul_schema(labels, N, spec)])


def sigma_XN(labels: Sequence[str], N: LocalityFunction, spec: OrderSpec) -> list[RelationSchema]:
    """The closed module relation families: locality, right multiplication, extended locality."""
    return [locality_schema(labels, N, spec), right_mul_schema(labels, N, spec),
            locality_ex_schema(labels, N, spec)]


def free_conformal_module(labels: Sequence[str], N: LocalityFunction, spec: OrderSpec,
                          algebra: list | None = None) -> ModulePresentation:
    return ModulePresentation(
        spec, tuple(labels),
        algebra_families=list(algebra) if algebra is not None else build_AX(labels, spec),
        module_families=sigma_XN(labels, N, spec))


def enumerate_normal_words(labels: Sequence[str], N: LocalityFunction, bound: int,
                           spec: OrderSpec | None = None) -> list[Word]:
    """All normal words with ``s + k + 1 <= bound``, ascending in the order."""
    spec = spec or OrderSpec(tuple(labels))
    out: list[Word] = []
    for u in b0_words(labels, N, bound):
        for s in range(bound - len(u) + 1):
            out.append((D,) * s + u)
    out.sort(key=spec.key)
    return out


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, NormalWord):
        return Polynomial.word(x.to_word())
    if isinstance(x, Letter):
        return Polynomial.word((x,))
    return Polynomial.word(tuple(x))


class ConformalAlgebra:
    """Evaluation of n-products on a module presented by a closed rule set.

    ``rules`` defaults to the free algebra Conf(X, N); an envelope's closed
    rule set may be supplied instead.
    """

    def __init__(self, labels: Sequence[str], N: LocalityFunction, spec: OrderSpec | None = None,
                 rules: RuleSet | None = None, max_index: int = 32):
        self.labels = tuple(labels)
        self.N = N
        self.spec = spec or OrderSpec(self.labels)
        self.rules = rules or split_null_extension(free_conformal_module(self.labels, N, self.spec))
        self.max_index = max_index

    def gen(self, a: str) -> Polynomial:
        return Polynomial.word((X(a),))

    def normalize(self, x) -> Polynomial:
        return self.rules.normal_form(_as_poly(x))

    def _check(self, n: int) -> None:
        if n > self.max_index:
            raise CapExceeded(f"index {n} exceeds cap {self.max_index}")

    def act(self, ops: Word, y) -> Polynomial:
        """Apply an operator word on the left and normalise."""
        for l in ops:
            if l.kind in ("L", "R"):
                self._check(l.index)
        return self.rules.normal_form(_as_poly(y).lmul(tuple(ops)))

    def d(self, y) -> Polynomial:
        return self.act((D,), y)

    def right_action(self, n: int, a: str, x) -> Polynomial:
        """``R{n}[a]`` applied to ``x``; equals the bracket {x o_n a}."""
        return self.act((R(n, a),), x)

    def product(self, x, n: int, y) -> Polynomial:
        """``x o_n y``: peel d from x by sesquilinearity, then leading generators by associativity.

        ``(a o_p w) o_n y = sum_t (-1)^t C(p,t) a o_(p-t) (w o_(n+t) y)``.
        """
        x = self.normalize(x)
        y = _as_poly(y)
        memo: dict = {}

        def word_prod(w: Word, m: int) -> Polynomial:
            key = (w, m)
            if key in memo:
                return memo[key]
            self._check(m)
            head = w[0]
            if head.kind == "d":
                res = Polynomial.zero() if m == 0 else word_prod(w[1:], m - 1).scale(-m)
            elif head.kind == "L":
                p, a = head.index, head.label
                res = Polynomial.zero()
                for t in range(p + 1):
                    inner = word_prod(w[1:], m + t)
                    if inner:
                        res = res + self.act((L(p - t, a),), inner).scale((-1) ** t * comb(p, t))
            elif head.kind == "x":
                res = self.act((L(m, head.label),), y)
            else:
                raise ValueError(f"cannot multiply non-normal word {render_word(w)}")
            memo[key] = res
            return res

        out = Polynomial.zero()
        for w, c in x.terms.items():
            out = out + word_prod(w, n).scale(c)
        return out

    def locality_horizon(self, x, y) -> int:
        """An index past which ``x o_m y`` is expected to vanish (checked by callers)."""
        x, y = self.normalize(x), _as_poly(y)
        size = max((len(w) for w in x.terms), default=0) + max((len(w) for w in y.terms), default=0)
        idx = max((sum(l.index for l in w if l.kind == "L") for w in x.terms), default=0)
        idx += max((sum(l.index for l in w if l.kind == "L") for w in y.terms), default=0)
        return self.N.max() * size + idx + 1

    def bracket(self, x, n: int, y) -> Polynomial:
        """``{x o_n y} = sum_s (-1)^(n+s) d^(s) (x o_(n+s) y)``."""
        top = self.locality_horizon(x, y)
        self._check(top + 1)
        out = Polynomial.zero()
        for s in range(max(top - n, 0) + 2):
            p = self.product(x, n + s, y)
            if not p:
                continue
            if n + s >= top:
                raise CapExceeded(f"product at index {n + s} does not vanish past the horizon {top}")
            sign = -1 if (n + s) % 2 else 1
            out = out + self.rules.normal_form(p.lmul((D,) * s).scale(Fraction(sign, _fact(s))))
        return out


def _fact(s: int) -> int:
    r = 1
    for i in range(2, s + 1):
        r *= i
    return r


def conformal_product(x, n: int, y, N: LocalityFunction, labels: Sequence[str],
                      spec: OrderSpec | None = None, max_index: int = 32) -> Polynomial:
    return ConformalAlgebra(labels, N, spec, max_index=max_index).product(x, n, y)


def conformal_gsb_check(S: Iterable[Polynomial], labels: Sequence[str], N: LocalityFunction,
                        spec: OrderSpec, caps: Caps, algebra: list | None = None) -> GSBCheck:
    """Check S together with the closed relations of M(X, N) over A(X) (or a supplied algebra)."""
    rules = [RewriteRule.from_poly(p, spec, "S%d" % (i + 1)) for i, p in enumerate(S) if p]
    p = free_conformal_module(labels, N, spec, algebra).with_rules(rules)
    return module_gsb_check(p, caps)
