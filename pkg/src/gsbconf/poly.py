"""Noncommutative polynomials over the rationals and rewriting by rule sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .words import Letter, OrderSpec, Word, render_scalar, render_word

__all__ = [
    "EmptyPolynomialError",
    "NoMatchError",
    "Polynomial",
    "RewriteRule",
    "Step",
    "RuleSet",
    "leading",
    "make_monic",
    "reduce_once",
    "normal_form",
    "replay",
]

ONE = Fraction(1)


class EmptyPolynomialError(ValueError):
    """Leading data requested for the zero polynomial."""


class NoMatchError(ValueError):
    """The requested occurrence of a rule pattern is not present."""


class Polynomial:
    """Finite linear combination of words; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | Iterable[tuple[Word, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, Fraction] = {}
        for w, c in items:
            w = tuple(w)
            acc[w] = acc.get(w, 0) + Fraction(c)
        self.terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def word(cls, w: Word, c=1) -> "Polynomial":
        return cls({tuple(w): c})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self.terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def coeff(self, w: Word) -> Fraction:
        return self.terms.get(tuple(w), Fraction(0))

    def words(self) -> list[Word]:
        return list(self.terms)

    def _combine(self, other: "Polynomial", sign: int) -> "Polynomial":
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) + sign * c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return Polynomial._raw(out)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return self._combine(other, 1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self._combine(other, -1)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({w: -c for w, c in self.terms.items()})

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial._raw({})
        return Polynomial._raw({w: c * v for w, v in self.terms.items()})

    def lmul(self, u: Word) -> "Polynomial":
        u = tuple(u)
        return Polynomial._raw({u + w: c for w, c in self.terms.items()})

    def rmul(self, v: Word) -> "Polynomial":
        v = tuple(v)
        return Polynomial._raw({w + v: c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            out: dict[Word, Fraction] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    out[w] = out.get(w, 0) + c1 * c2
            return Polynomial({w: c for w, c in out.items() if c})
        if isinstance(other, tuple):
            return self.rmul(other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, tuple):
            return self.lmul(other)
        return self.scale(other)

    def render(self, spec: OrderSpec | None = None) -> str:
        if not self.terms:
            return "0"
        ws = list(self.terms)
        if spec is not None:
            ws.sort(key=spec.key, reverse=True)
        out = []
        for i, w in enumerate(ws):
            c = self.terms[w]
            a = abs(c)
            if not w:
                term = render_scalar(a)
            elif a == 1:
                term = render_word(w)
            else:
                term = "%s*%s" % (render_scalar(a), render_word(w))
            if i == 0:
                out.append(("-" if c < 0 else "") + term)
            else:
                out.append("%s %s" % ("-" if c < 0 else "+", term))
        return " ".join(out)

    def __repr__(self) -> str:
        return "Polynomial(%s)" % self.render()


def leading(p: Polynomial, spec: OrderSpec) -> tuple[Word, Fraction]:
    if not p.terms:
        raise EmptyPolynomialError("zero polynomial has no leading word")
    w = max(p.terms, key=spec.key)
    return w, p.terms[w]


def make_monic(p: Polynomial, spec: OrderSpec) -> Polynomial:
    _, c = leading(p, spec)
    return p if c == 1 else p.scale(1 / c)


@dataclass(frozen=True, eq=False)
class RewriteRule:
    """``pattern`` rewrites to ``pattern - poly``; ``poly`` is monic with leading word ``pattern``."""

    pattern: Word
    poly: Polynomial
    name: str = ""
    replacement: tuple = field(init=False, repr=False)

    def __post_init__(self):
        rep = tuple((w, -c) for w, c in self.poly.terms.items() if w != self.pattern)
        object.__setattr__(self, "replacement", rep)

    @classmethod
    def from_poly(cls, p: Polynomial, spec: OrderSpec, name: str = "") -> "RewriteRule":
        p = make_monic(p, spec)
        return cls(leading(p, spec)[0], p, name)

    def render(self, spec: OrderSpec | None = None) -> str:
        return self.poly.render(spec)

    def __repr__(self) -> str:
        tag = f"{self.name}: " if self.name else ""
        return f"RewriteRule({tag}{render_word(self.pattern)} -> {self.poly.render()})"


def reduce_once(f: Polynomial, rule: RewriteRule, occurrence: tuple[Word, Word]) -> Polynomial:
    prefix, suffix = (tuple(x) for x in occurrence)
    w = prefix + rule.pattern + suffix
    alpha = f.terms.get(w)
    if not alpha:
        raise NoMatchError(f"{render_word(w)} does not occur in the polynomial")
    return f - rule.poly.lmul(prefix).rmul(suffix).scale(alpha)


@dataclass(frozen=True)
class Step:
    coeff: Fraction
    prefix: Word
    rule: RewriteRule
    suffix: Word

    @property
    def word(self) -> Word:
        return self.prefix + self.rule.pattern + self.suffix


def replay(f: Polynomial, steps: Iterable[Step]) -> Polynomial:
    """Apply a recorded certificate: ``f - sum(coeff * prefix * rule * suffix)``."""
    out = f
    for s in steps:
        out = out - s.rule.poly.lmul(s.prefix).rmul(s.suffix).scale(s.coeff)
    return out


class RuleSet:
    """Concrete rules plus lazily matched relation families over one order.

    Reduction strategy: the greatest reducible word is rewritten first, at
    its leftmost reducible position, by the longest pattern there (ties go
    to the earliest inserted rule or family).  With ``annihilate`` set, any
    module generator followed by a further letter rewrites to zero.
    """

    def __init__(self, spec: OrderSpec, rules: Iterable[RewriteRule] = (),
                 families: Iterable = (), annihilate: bool = False):
        self.spec = spec
        self.annihilate = annihilate
        self.families: list = []
        self.rules: list[RewriteRule] = []
        self._seq: dict[int, int] = {}
        self._by_pattern: dict[Word, RewriteRule] = {}
        self._lengths: set[int] = set()
        self._counter = 0
        self._memo: dict[Word, dict] = {}
        self._step_cache: dict[Word, object] = {}
        self._annihilators: dict[Word, RewriteRule] = {}
        for fam in families:
            self.add_family(fam)
        for r in rules:
            self.add(r)

    def _next(self, obj) -> None:
        self._seq[id(obj)] = self._counter
        self._counter += 1

    def add_family(self, fam) -> None:
        self.families.append(fam)
        self._next(fam)
        self._invalidate()

    def add(self, rule: RewriteRule) -> None:
        self.rules.append(rule)
        self._next(rule)
        self._by_pattern.setdefault(rule.pattern, rule)
        self._lengths.add(len(rule.pattern))
        self._invalidate()

    def remove(self, rule: RewriteRule) -> None:
        self.rules = [r for r in self.rules if r is not rule]
        if self._by_pattern.get(rule.pattern) is rule:
            del self._by_pattern[rule.pattern]
            for r in self.rules:
                if r.pattern == rule.pattern:
                    self._by_pattern[r.pattern] = r
                    break
        self._lengths = {len(r.pattern) for r in self.rules}
        self._invalidate()

    def extend(self, rules: Iterable[RewriteRule]) -> None:
        for r in rules:
            self.add(r)

    def _invalidate(self) -> None:
        self._memo.clear()
        self._step_cache.clear()

    def copy(self) -> "RuleSet":
        other = RuleSet(self.spec, annihilate=self.annihilate)
        for fam in self.families:
            other.add_family(fam)
        other.extend(self.rules)
        return other

    # -- matching ----------------------------------------------------------

    def annihilator(self, pattern: Word) -> RewriteRule:
        r = self._annihilators.get(pattern)
        if r is None:
            r = RewriteRule(pattern, Polynomial.word(pattern), "annihilate")
            self._annihilators[pattern] = r
        return r

    def match_at(self, w: Word, i: int) -> RewriteRule | None:
        """Preferred rule whose pattern occurs in ``w`` starting at ``i``."""
        if self.annihilate and w[i].kind == "x" and i + 1 < len(w):
            return self.annihilator(w[i:i + 2])
        best = None
        best_key = None
        seq = self._seq
        for fam in self.families:
            r = fam.match(w, i)
            if r is not None:
                k = (len(r.pattern), -seq[id(fam)])
                if best_key is None or k > best_key:
                    best, best_key = r, k
        by_pattern = self._by_pattern
        n = len(w)
        for ln in self._lengths:
            if i + ln <= n:
                r = by_pattern.get(w[i:i + ln])
                if r is not None:
                    k = (ln, -seq[id(r)])
                    if best_key is None or k > best_key:
                        best, best_key = r, k
        return best

    def all_matches_at(self, w: Word, i: int) -> list[RewriteRule]:
        """Every rule (concrete, family instance, annihilator) whose pattern occurs at ``i``."""
        out = []
        for fam in self.families:
            r = fam.match(w, i)
            if r is not None:
                out.append(r)
        n = len(w)
        seen = set()
        for r in self.rules:
            ln = len(r.pattern)
            if i + ln <= n and w[i:i + ln] == r.pattern and id(r) not in seen:
                seen.add(id(r))
                out.append(r)
        if self.annihilate and i + 1 < n and w[i].kind == "x":
            out.append(self.annihilator(w[i:i + 2]))
        return out

    def find(self, w: Word) -> tuple[int, RewriteRule] | None:
        for i in range(len(w)):
            r = self.match_at(w, i)
            if r is not None:
                return i, r
        return None

    def is_reduced(self, w: Word) -> bool:
        return self.find(tuple(w)) is None

    def contains_pattern(self, w: Word) -> bool:
        return not self.is_reduced(w)

    # -- normal forms -------------------------------------------------------

    def _expand(self, w: Word):
        st = self._step_cache.get(w, 0)
        if st != 0:
            return st
        occ = self.find(w)
        if occ is None:
            st = None
        else:
            i, r = occ
            pre, post = w[:i], w[i + len(r.pattern):]
            st = [(pre + t + post, c) for t, c in r.replacement]
        self._step_cache[w] = st
        return st

    def word_normal_form(self, w: Word) -> dict:
        memo = self._memo
        got = memo.get(w)
        if got is not None:
            return got
        stack = [w]
        while stack:
            u = stack[-1]
            if u in memo:
                stack.pop()
                continue
            step = self._expand(u)
            if step is None:
                memo[u] = {u: ONE}
                stack.pop()
                continue
            missing = [v for v, _ in step if v not in memo]
            if missing:
                stack.extend(missing)
                continue
            acc: dict[Word, Fraction] = {}
            for v, c in step:
                for t, d in memo[v].items():
                    acc[t] = acc.get(t, 0) + c * d
            memo[u] = {t: c for t, c in acc.items() if c}
            stack.pop()
        return memo[w]

    def normal_form(self, f: Polynomial, certificate: list | None = None,
                    max_steps: int | None = None) -> Polynomial:
        """Fully reduced form of ``f``; optionally records every rewriting step."""
        if certificate is None:
            acc: dict[Word, Fraction] = {}
            for w, c in f.terms.items():
                for t, d in self.word_normal_form(w).items():
                    acc[t] = acc.get(t, 0) + c * d
            return Polynomial._raw({t: c for t, c in acc.items() if c})
        key = self.spec.key
        pending = dict(f.terms)
        result: dict[Word, Fraction] = {}
        steps = 0
        while pending:
            w = max(pending, key=key)
            c = pending.pop(w)
            occ = self.find(w)
            if occ is None:
                result[w] = c
                continue
            i, r = occ
            pre, post = w[:i], w[i + len(r.pattern):]
            certificate.append(Step(c, pre, r, post))
            steps += 1
            if max_steps is not None and steps > max_steps:
                raise RuntimeError(f"normal form exceeded {max_steps} steps")
            for t, d in r.replacement:
                v = pre + t + post
                x = pending.get(v, 0) + c * d
                if x:
                    pending[v] = x
                else:
                    pending.pop(v, None)
        return Polynomial._raw(result)


def normal_form(f: Polynomial, rules, spec: OrderSpec | None = None,
                certificate: list | None = None) -> Polynomial:
    """Convenience wrapper accepting a :class:`RuleSet` or an iterable of rules."""
    if not isinstance(rules, RuleSet):
        rules = RuleSet(spec, rules)
    return rules.normal_form(f, certificate)
