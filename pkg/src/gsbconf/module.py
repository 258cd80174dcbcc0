"""Left modules over a presented algebra via the split null extension."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .engine import (
    Composition,
    CompletionResult,
    CompositionIndex,
    complete,
    in_cap_rules,
)
from .poly import Polynomial, RewriteRule, RuleSet
from .schema import Caps
from .words import D, L, Letter, OrderSpec, R, Word, X, is_module_word, render_word

__all__ = [
    "ModulePresentation",
    "GSBCheck",
    "split_null_extension",
    "annihilation_rules",
    "module_alphabet",
    "module_gsb_check",
    "complete_module",
    "reduced_module_words",
    "conformal_weight",
    "weighted_length",
    "OracleResult",
    "oracle_dimensions",
]


@dataclass
class ModulePresentation:
    """Algebra relations over the operator letters and module relations ending in a generator."""

    spec: OrderSpec
    labels: tuple[str, ...]
    algebra_families: list = field(default_factory=list)
    algebra_rules: list[RewriteRule] = field(default_factory=list)
    module_families: list = field(default_factory=list)
    module_rules: list[RewriteRule] = field(default_factory=list)
    operator_kinds: tuple[str, ...] = ("d", "L", "R")

    def __post_init__(self):
        for r in self.module_rules:
            for w in r.poly.terms:
                if not is_module_word(w):
                    raise ValueError(f"module relation word {render_word(w)} is not of the form u·x")

    def with_rules(self, extra: Iterable[RewriteRule]) -> "ModulePresentation":
        return ModulePresentation(self.spec, self.labels, list(self.algebra_families),
                                  list(self.algebra_rules), list(self.module_families),
                                  list(self.module_rules) + list(extra), self.operator_kinds)


def module_alphabet(labels: Sequence[str], caps: Caps, kinds: Sequence[str] = ("d", "L", "R")) -> list[Letter]:
    """Operator letters within the index cap followed by the module generators."""
    out: list[Letter] = []
    if "d" in kinds:
        out.append(D)
    for k in ("L", "R"):
        if k in kinds:
            out.extend(Letter(k, n, a) for n in range(caps.max_index + 1) for a in labels)
    out.extend(X(a) for a in labels)
    return out


def split_null_extension(p: ModulePresentation) -> RuleSet:
    """Rules of the extension algebra; ``x·a`` and ``x·y`` are annihilated lazily."""
    return RuleSet(p.spec, list(p.algebra_rules) + list(p.module_rules),
                   list(p.algebra_families) + list(p.module_families), annihilate=True)


def annihilation_rules(p: ModulePresentation, caps: Caps) -> list[RewriteRule]:
    rs = split_null_extension(p)
    letters = module_alphabet(p.labels, caps, p.operator_kinds)
    return [rs.annihilator((x, a)) for x in letters if x.kind == "x" for a in letters]


@dataclass
class GSBCheck:
    is_gsb: bool
    witnesses: list[tuple[Composition, Polynomial]]
    checked: int

    def __bool__(self) -> bool:
        return self.is_gsb


def module_gsb_check(p: ModulePresentation, caps: Caps, stop_at_first: bool = False) -> GSBCheck:
    rules = split_null_extension(p)
    index = CompositionIndex(caps)
    witnesses = []
    checked = 0
    alphabet = module_alphabet(p.labels, caps, p.operator_kinds)
    for r in in_cap_rules(rules, caps, alphabet):
        for c in index.add(r):
            checked += 1
            rem = rules.normal_form(c.value)
            if rem:
                witnesses.append((c, rem))
                if stop_at_first:
                    return GSBCheck(False, witnesses, checked)
    return GSBCheck(not witnesses, witnesses, checked)


def complete_module(p: ModulePresentation, caps: Caps) -> CompletionResult:
    rules = split_null_extension(p)
    return complete(rules, caps, module_alphabet(p.labels, caps, p.operator_kinds))


def reduced_module_words(rules: RuleSet | ModulePresentation, labels: Sequence[str], bound: int,
                         max_index: int = 8, kinds: Sequence[str] = ("d", "L", "R")) -> list[Word]:
    """Module words of length at most ``bound`` containing no rule pattern, ascending.

    Words are grown right to left: a reduced word stays reduced after
    prepending a letter unless a pattern starts at the new first position.
    """
    if isinstance(rules, ModulePresentation):
        rules = split_null_extension(rules)
    caps = Caps(max_index, bound)
    letters = [l for l in module_alphabet(labels, caps, kinds) if l.kind != "x"]
    layer = [w for w in ((X(a),) for a in labels) if rules.match_at(w, 0) is None]
    out = list(layer)
    for _ in range(bound - 1):
        nxt = []
        for w in layer:
            for l in letters:
                u = (l,) + w
                if rules.match_at(u, 0) is None:
                    nxt.append(u)
        out.extend(nxt)
        layer = nxt
    out.sort(key=rules.spec.key)
    return out


# ---------------------------------------------------------------------------
# linear-algebra oracle
# ---------------------------------------------------------------------------

def conformal_weight(w: Word) -> int:
    """Sum of operator indices minus the number of d, L and R letters."""
    return sum(l.index - 1 for l in w if l.kind in ("L", "R")) - sum(1 for l in w if l.kind == "d")


def weighted_length(w: Word, r_weight: int) -> int:
    return sum(r_weight if l.kind == "R" else 1 for l in w)


def _window(labels: Sequence[str], bound: int, lo: int, hi: int, r_weight: int,
            kinds: Sequence[str]) -> dict[int, list[Word]]:
    """Module words of weighted length <= bound with conformal weight in [lo, hi], by weight."""
    out: dict[int, list[Word]] = {}
    ops = [k for k in ("L", "R") if k in kinds]

    def grow(w: Word, wl: int, cw: int):
        # w is a module word; prepend letters while the weight can still land below hi
        if lo <= cw <= hi:
            out.setdefault(cw, []).append(w)
        room = bound - wl
        if room <= 0:
            return
        if "d" in kinds and cw - 1 - (room - 1) <= hi:
            grow((D,) + w, wl + 1, cw - 1)
        for k in ops:
            lw = r_weight if k == "R" else 1
            if lw > room:
                continue
            rest = room - lw
            n = 0
            while cw + n - 1 - rest <= hi:
                for a in labels:
                    grow((Letter(k, n, a),) + w, wl + lw, cw + n - 1)
                n += 1

    for a in labels:
        grow((X(a),), 1, 0)
    return out


def _rank(rows: Iterable[dict], key) -> int:
    pivots: dict[Word, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            col = max(row, key=key)
            piv = pivots.get(col)
            if piv is None:
                c = row[col]
                pivots[col] = {w: v / c for w, v in row.items()}
                break
            c = row[col]
            for w, v in piv.items():
                x = row.get(w, 0) - c * v
                if x:
                    row[w] = x
                else:
                    row.pop(w, None)
    return len(pivots)


@dataclass
class OracleResult:
    """Per cumulative degree: dimension from linear algebra and count of reduced words."""

    dimensions: list[int]
    reduced_counts: list[int]

    @property
    def agrees(self) -> bool:
        return self.dimensions == self.reduced_counts


def oracle_dimensions(rules: RuleSet, labels: Sequence[str], bound: int,
                      weights: tuple[int, int] | None = None, r_weight: int = 1,
                      kinds: Sequence[str] = ("d", "L", "R")) -> OracleResult:
    """Exact Gaussian elimination over a graded window of module words.

    For every ``d <= bound`` the window ``V_d`` holds the module words of
    weighted length at most ``d`` (``R`` letters weigh ``r_weight``) whose
    conformal weight lies in ``weights``.  The relations are all products
    ``u·s·v`` of rule instances lying inside ``V_d``; the dimension is
    ``|V_d|`` minus their rank.  All rules must be homogeneous for the
    conformal weight and must not raise the weighted length.
    """
    if weights is None:
        weights = (-bound, bound)
    lo, hi = weights
    comps = _window(labels, bound, lo, hi, r_weight, kinds)
    key = rules.spec.key
    dims: list[int] = []
    counts: list[int] = []
    for d in range(1, bound + 1):
        dim = 0
        cnt = 0
        for cw, words in comps.items():
            V = [w for w in words if weighted_length(w, r_weight) <= d]
            Vset = set(V)
            rows = []
            for w in V:
                reducible = False
                for i in range(len(w)):
                    for r in rules.all_matches_at(w, i):
                        reducible = True
                        pre, post = w[:i], w[i + len(r.pattern):]
                        row = {pre + t + post: c for t, c in r.poly.terms.items()}
                        if not all(t in Vset for t in row):
                            outside = [t for t in row if t not in Vset and is_module_word(t)]
                            bad = [t for t in outside if conformal_weight(t) != cw]
                            if bad:
                                raise ValueError(
                                    "rule %s is not homogeneous/weight-monotone at %s"
                                    % (r.name, render_word(w)))
                            continue
                        rows.append(row)
                if not reducible:
                    cnt += 1
            dim += len(V) - _rank(rows, key)
        dims.append(dim)
        counts.append(cnt)
    return OracleResult(dims, counts)
