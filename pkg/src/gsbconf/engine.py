"""Compositions (critical pairs), triviality tests and cap-bounded completion."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable

from .poly import Polynomial, RewriteRule, RuleSet, Step, make_monic, replay
from .schema import Caps
from .words import OrderSpec, Word, render_word

__all__ = [
    "Composition",
    "Triviality",
    "CompletionReport",
    "CompletionResult",
    "TraceEntry",
    "find_compositions",
    "is_trivial",
    "complete",
    "in_cap_rules",
    "CompositionIndex",
    "cap_stable",
    "interreduce",
]

INCLUSION = "inclusion"
INTERSECTION = "intersection"


@dataclass(eq=False)
class Composition:
    kind: str
    f: RewriteRule
    g: RewriteRule
    w: Word
    u: Word  # left context (of g for inclusion, of g's start for intersection)
    v: Word

    @property
    def value(self) -> Polynomial:
        if self.kind == INCLUSION:
            # w = f̄ = u ḡ v
            return self.f.poly - self.g.poly.lmul(self.u).rmul(self.v)
        # f̄ = u1 u2, ḡ = u2 v2, w = u1 u2 v2
        return self.f.poly.rmul(self.v) - self.g.poly.lmul(self.u)

    def describe(self) -> str:
        return "%s %s × %s at %s" % (
            self.kind, self.f.name or "?", self.g.name or "?", render_word(self.w))


def find_compositions(f: RewriteRule, g: RewriteRule) -> list[Composition]:
    """Every inclusion and proper overlap between the leading words of ``f`` and ``g``."""
    out: list[Composition] = []
    a, b = f.pattern, g.pattern
    seen = set()

    def inclusions(big: RewriteRule, small: RewriteRule):
        B, S = big.pattern, small.pattern
        if big is small:
            return
        for i in range(len(B) - len(S) + 1):
            if B[i:i + len(S)] == S:
                key = (INCLUSION, id(big), id(small), i)
                if key not in seen:
                    seen.add(key)
                    out.append(Composition(INCLUSION, big, small, B, B[:i], B[i + len(S):]))

    def overlaps(left: RewriteRule, right: RewriteRule):
        P, Q = left.pattern, right.pattern
        for k in range(1, min(len(P), len(Q))):
            if P[len(P) - k:] == Q[:k]:
                key = (INTERSECTION, id(left), id(right), k)
                if key not in seen:
                    seen.add(key)
                    out.append(Composition(INTERSECTION, left, right, P + Q[k:], P[:len(P) - k], Q[k:]))

    if len(a) >= len(b):
        inclusions(f, g)
    if len(b) > len(a) or (len(b) == len(a) and a != b):
        inclusions(g, f)
    overlaps(f, g)
    if f is not g:
        overlaps(g, f)
    return out


@dataclass
class Triviality:
    trivial: bool
    remainder: Polynomial
    certificate: list[Step] | None = None

    def __bool__(self) -> bool:
        return self.trivial


def is_trivial(c: Composition, rules: RuleSet, certify: bool = False) -> Triviality:
    """Trivial iff the composition reduces to zero; certificates keep every context word below ``w``."""
    value = c.value
    if not certify:
        rem = rules.normal_form(value)
        return Triviality(not rem, rem)
    steps: list[Step] = []
    rem = rules.normal_form(value, certificate=steps)
    key = rules.spec.key
    kw = key(c.w)
    for s in steps:
        if not key(s.word) < kw:
            raise AssertionError(f"certificate word {render_word(s.word)} not below {render_word(c.w)}")
    assert replay(value, steps) == rem
    return Triviality(not rem, rem, steps)


class CompositionIndex:
    """Pattern index over the in-cap rules for fast overlap discovery."""

    def __init__(self, caps: Caps):
        self.caps = caps
        self.rules: list[RewriteRule] = []
        self.by_prefix: dict[Word, list[RewriteRule]] = {}
        self.by_suffix: dict[Word, list[RewriteRule]] = {}
        self.by_factor: dict[Word, list[tuple[RewriteRule, int]]] = {}
        self.by_pattern: dict[Word, list[RewriteRule]] = {}

    def add(self, g: RewriteRule) -> list[Composition]:
        """Insert ``g`` and return its compositions with everything indexed so far (itself included)."""
        caps = self.caps
        P = g.pattern
        n = len(P)
        self.rules.append(g)
        for k in range(1, n):
            self.by_prefix.setdefault(P[:k], []).append(g)
            self.by_suffix.setdefault(P[n - k:], []).append(g)
        for i in range(n):
            for j in range(i + 1, n + 1):
                self.by_factor.setdefault(P[i:j], []).append((g, i))
        self.by_pattern.setdefault(P, []).append(g)

        out: list[Composition] = []
        seen: set = set()

        def push(c: Composition, key):
            if key in seen or not caps.admits(c.w):
                return
            seen.add(key)
            out.append(c)

        # g on the left: suffix of ḡ equals a prefix of f̄
        for k in range(1, n):
            for f in self.by_prefix.get(P[n - k:], ()):
                if len(f.pattern) > k:
                    push(Composition(INTERSECTION, g, f, P + f.pattern[k:], P[:n - k], f.pattern[k:]),
                         (INTERSECTION, id(g), id(f), k))
        # g on the right
        for k in range(1, n):
            for f in self.by_suffix.get(P[:k], ()):
                if len(f.pattern) > k:
                    m = len(f.pattern)
                    push(Composition(INTERSECTION, f, g, f.pattern + P[k:], f.pattern[:m - k], P[k:]),
                         (INTERSECTION, id(f), id(g), k))
        # some indexed pattern is a factor of ḡ
        for i in range(n):
            for j in range(i + 1, n + 1):
                for f in self.by_pattern.get(P[i:j], ()):
                    if f is not g:
                        push(Composition(INCLUSION, g, f, P, P[:i], P[j:]), (INCLUSION, id(g), id(f), i))
        # ḡ is a factor of an indexed pattern
        for f, i in self.by_factor.get(P, ()):
            if f is not g:
                push(Composition(INCLUSION, f, g, f.pattern, f.pattern[:i], f.pattern[i + n:]),
                     (INCLUSION, id(f), id(g), i))
        return out


def in_cap_rules(rules: RuleSet, caps: Caps, alphabet: Iterable | None = None) -> list[RewriteRule]:
    """Family instances and concrete rules whose patterns fit in ``caps``.

    ``alphabet`` (letters) materialises the annihilation rules ``x·a`` of a
    module extension when the rule set annihilates.
    """
    out: list[RewriteRule] = []
    for fam in rules.families:
        out.extend(fam.instances(caps))
    out.extend(r for r in rules.rules if caps.admits(r.pattern))
    if rules.annihilate and alphabet is not None:
        letters = list(alphabet)
        for x in (l for l in letters if l.kind == "x"):
            for a in letters:
                pat = (x, a)
                if caps.admits(pat):
                    out.append(rules.annihilator(pat))
    return out


@dataclass
class TraceEntry:
    kind: str
    f: str
    g: str
    w: Word
    outcome: str

    def line(self) -> str:
        return "%s | %s | %s" % (self.kind, render_word(self.w), self.outcome)


@dataclass
class CompletionReport:
    compositions: int = 0
    added: int = 0
    retracted: int = 0
    index_touched: bool = False
    degree_touched: bool = False
    beyond_cap: list[Word] = field(default_factory=list)

    @property
    def saturated(self) -> bool:
        return self.index_touched or self.degree_touched

    def render(self) -> str:
        if not self.saturated:
            return "clean"
        parts = []
        if self.index_touched:
            parts.append("index cap touched")
        if self.degree_touched:
            parts.append("degree cap touched")
        return ", ".join(parts)


@dataclass
class CompletionResult:
    closed: RuleSet
    new_rules: list[RewriteRule]
    report: CompletionReport
    trace: list[TraceEntry]
    provenance: dict = field(default_factory=dict)


def _touches(w: Word, caps: Caps) -> tuple[bool, bool]:
    idx = max((l.index for l in w), default=-1)
    return idx >= caps.max_index, len(w) >= caps.max_degree


def _occurs(small: Word, big: Word) -> bool:
    n = len(small)
    return any(big[i:i + n] == small for i in range(len(big) - n + 1))


def complete(rules: RuleSet, caps: Caps, alphabet: Iterable | None = None,
             max_new: int | None = None) -> CompletionResult:
    """Add normal forms of nontrivial in-cap compositions until all are trivial.

    Compositions are processed smallest ambiguity word first.  When a new
    rule reduces the leading word of an earlier new rule, the earlier one is
    retracted and its normal form re-admitted.  The input rule set is not
    modified.
    """
    closed = rules.copy()
    spec = closed.spec
    index = CompositionIndex(caps)
    heap: list = []
    seq = 0
    for r in in_cap_rules(closed, caps, alphabet):
        for c in index.add(r):
            heapq.heappush(heap, (spec.key(c.w), seq, c))
            seq += 1
    report = CompletionReport()
    trace: list[TraceEntry] = []
    live: list[RewriteRule] = []
    provenance: dict = {}
    counter = 0

    def admit(value: Polynomial, origin) -> str:
        nonlocal counter, seq
        work = [(value, origin)]
        outcome = "trivial"
        while work:
            q, org = work.pop()
            q = closed.normal_form(q)
            if not q:
                continue
            counter += 1
            rule = RewriteRule.from_poly(q, spec, name="new%d" % counter)
            closed.add(rule)
            live.append(rule)
            provenance[id(rule)] = org
            report.added += 1
            if outcome == "trivial":
                outcome = "new " + render_word(rule.pattern)
            if max_new is not None and report.added > max_new:
                raise RuntimeError(f"completion exceeded {max_new} new rules")
            if caps.admits(rule.pattern):
                for c2 in index.add(rule):
                    heapq.heappush(heap, (spec.key(c2.w), seq, c2))
                    seq += 1
            for old in [r for r in live if r is not rule and _occurs(rule.pattern, r.pattern)]:
                closed.remove(old)
                live.remove(old)
                report.retracted += 1
                trace.append(TraceEntry("retract", old.name, rule.name, old.pattern, "by " + rule.name))
                work.append((old.poly, provenance.get(id(old))))
        return outcome

    while heap:
        _, _, c = heapq.heappop(heap)
        report.compositions += 1
        outcome = admit(c.value, c)
        trace.append(TraceEntry(c.kind, c.f.name, c.g.name, c.w, outcome))
    for rule in live:
        ti, td = _touches(rule.pattern, caps)
        report.index_touched |= ti
        report.degree_touched |= td
        if not caps.admits(rule.pattern):
            report.beyond_cap.append(rule.pattern)
    return CompletionResult(closed, live, report, trace, provenance)


def interreduce(result: CompletionResult) -> list[RewriteRule]:
    """Drop new rules whose leading word is reducible by the others and reduce the tails of the rest.

    A rule is only dropped if the remaining rules still reduce it to zero.
    """
    closed = result.closed
    spec = closed.spec
    base = [x for x in closed.rules if all(x is not r for r in result.new_rules)]
    keep = list(result.new_rules)
    for r in list(reversed(result.new_rules)):
        rest = [x for x in keep if x is not r]
        others = RuleSet(spec, base + rest, closed.families, closed.annihilate)
        if others.find(r.pattern) is not None and not others.normal_form(r.poly):
            keep = rest
    out = []
    for r in keep:
        others = RuleSet(spec, base + [x for x in keep if x is not r], closed.families, closed.annihilate)
        tail = others.normal_form(r.poly - Polynomial.word(r.pattern))
        out.append(RewriteRule(r.pattern, Polynomial.word(r.pattern) + tail, r.name))
    return out


def cap_stable(rules: RuleSet, caps: Caps, alphabet_for=None, by: int = 2) -> bool:
    """Raising the index cap by ``by`` adds no new leading words inside the old caps."""
    lo = complete(rules, caps, alphabet_for(caps) if alphabet_for else None)
    hi_caps = caps.raised(by)
    hi = complete(rules, hi_caps, alphabet_for(hi_caps) if alphabet_for else None)
    old = {r.pattern for r in lo.new_rules}
    red_lo = lo.closed
    for r in hi.new_rules:
        if caps.admits(r.pattern) and r.pattern not in old and red_lo.find(r.pattern) is None:
            return False
    return True
