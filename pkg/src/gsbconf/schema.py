"""Parameterised relation families.

A :class:`RelationSchema` describes an infinite family of relations by a
leading-word template (letters whose indices and labels are variables), an
admissibility predicate, and a builder producing the concrete polynomial
for an assignment.  Families are matched lazily inside words, so rewriting
never truncates indices; only enumeration of instances takes caps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable, Sequence

from .poly import Polynomial, RewriteRule, leading
from .words import D, Letter, OrderSpec, Word, render_word

__all__ = [
    "InadmissibleAssignment",
    "SchemaError",
    "RelationSchema",
    "instantiate",
    "divided_power",
    "binom",
    "Caps",
]


class InadmissibleAssignment(ValueError):
    """Assignment violates the schema constraints."""


class SchemaError(ValueError):
    """The designated leading term is not the true leading word."""


@dataclass(frozen=True)
class Caps:
    """Index cap ``K``, word-length cap ``D`` and locality-search cap ``KN``."""

    max_index: int = 8
    max_degree: int = 6
    max_locality: int = 3

    def admits(self, w: Word) -> bool:
        if len(w) > self.max_degree:
            return False
        return all(l.index <= self.max_index for l in w)

    def raised(self, by: int = 2) -> "Caps":
        return Caps(self.max_index + by, self.max_degree, self.max_locality)


def binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def divided_power(s: int) -> Polynomial:
    """``d^(s) = d^s / s!``."""
    return Polynomial.word((D,) * s, Fraction(1, factorial(s)))


# template letter: (kind, index, label); index is a variable name, an int,
# or None; label is a variable name (listed in label_vars) or a literal.
Template = tuple


@dataclass(eq=False)
class RelationSchema:
    name: str
    pattern: tuple[Template, ...]
    build: Callable[[dict], Polynomial]
    spec: OrderSpec
    labels: tuple[str, ...]
    index_vars: tuple[str, ...] = ()
    label_vars: tuple[str, ...] = ()
    constraint: Callable[[dict], bool] = lambda asg: True
    # optional trailing variable word (e.g. a ∂-free normal word)
    tail_var: str | None = None
    tail_ok: Callable[[Word], bool] | None = None
    tail_words: Callable[[int], Iterable[Word]] | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def fixed_length(self) -> int:
        return len(self.pattern)

    # -- instantiation ----------------------------------------------------

    def leading_word(self, asg: dict) -> Word:
        out: list[Letter] = []
        for kind, idx, lab in self.pattern:
            if kind == "d":
                out.append(D)
                continue
            n = asg[idx] if isinstance(idx, str) else (-1 if idx is None else idx)
            a = asg[lab] if lab in self.label_vars else lab
            out.append(Letter(kind, n, a))
        w = tuple(out)
        if self.tail_var is not None:
            w += tuple(asg[self.tail_var])
        return w

    def admissible(self, asg: dict) -> bool:
        for v in self.index_vars:
            if v not in asg or not isinstance(asg[v], int) or asg[v] < 0:
                return False
        for v in self.label_vars:
            if asg.get(v) not in self.labels:
                return False
        if self.tail_var is not None:
            u = asg.get(self.tail_var)
            if u is None or (self.tail_ok is not None and not self.tail_ok(tuple(u))):
                return False
        return bool(self.constraint(asg))

    def instantiate(self, asg: dict) -> Polynomial:
        if not self.admissible(asg):
            raise InadmissibleAssignment(f"{self.name}: inadmissible assignment {asg!r}")
        return self.build(asg)

    def rule(self, asg: dict) -> RewriteRule:
        p = self.instantiate(asg)
        lead = self.leading_word(asg)
        w, c = leading(p, self.spec)
        if w != lead or c != 1:
            raise SchemaError(
                f"{self.name}: designated leading word {render_word(lead)} "
                f"but polynomial leads with {c}*{render_word(w)}"
            )
        return RewriteRule(lead, p, self.name)

    # -- matching ---------------------------------------------------------

    def _unify(self, sub: Sequence[Letter]) -> dict | None:
        asg: dict = {}
        for (kind, idx, lab), l in zip(self.pattern, sub):
            if l.kind != kind:
                return None
            if kind == "d":
                continue
            if isinstance(idx, str):
                if asg.setdefault(idx, l.index) != l.index:
                    return None
            elif idx is not None and idx != l.index:
                return None
            if lab in self.label_vars:
                if asg.setdefault(lab, l.label) != l.label:
                    return None
            elif lab != l.label:
                return None
        return asg

    def match(self, w: Word, i: int) -> RewriteRule | None:
        n = len(self.pattern)
        if self.tail_var is None:
            if i + n > len(w):
                return None
            sub = w[i:i + n]
        else:
            if i + n >= len(w):
                return None
            sub = w[i:]
        cache = self._cache
        if sub in cache:
            return cache[sub]
        r = None
        first = self.pattern[0][0]
        if sub[0].kind == first:
            asg = self._unify(sub[:n])
            if asg is not None:
                if self.tail_var is not None:
                    asg[self.tail_var] = sub[n:]
                if self.admissible(asg):
                    r = self.rule(asg)
        cache[sub] = r
        return r

    # -- enumeration ------------------------------------------------------

    def instances(self, caps: Caps) -> list[RewriteRule]:
        """All admissible instances whose leading word lies within ``caps``."""
        idx_ranges = [range(caps.max_index + 1)] * len(self.index_vars)
        lab_ranges = [self.labels] * len(self.label_vars)
        if self.tail_var is not None:
            room = caps.max_degree - len(self.pattern)
            tails = list(self.tail_words(room)) if room > 0 else []
        else:
            tails = [None]
        out = []
        for idxs in itertools.product(*idx_ranges):
            for labs in itertools.product(*lab_ranges):
                asg = dict(zip(self.index_vars, idxs))
                asg.update(zip(self.label_vars, labs))
                for u in tails:
                    if u is not None:
                        asg[self.tail_var] = u
                    if not self.admissible(asg):
                        continue
                    lead = self.leading_word(asg)
                    if not caps.admits(lead):
                        continue
                    out.append(self.rule(dict(asg)))
        return out

    def __repr__(self) -> str:
        return f"RelationSchema({self.name})"


def instantiate(schema: RelationSchema, assignment: dict) -> Polynomial:
    return schema.instantiate(assignment)
