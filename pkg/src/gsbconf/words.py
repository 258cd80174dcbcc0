"""Letters, words and monomial orders.

A word is a plain tuple of :class:`Letter` values.  Letters come in five
kinds:

``d``  the derivation (rendered ``d``),
``L``  left multiplication ``L{n}[a]``,
``R``  right multiplication ``R{n}[a]``,
``x``  a module generator (rendered by its bare label),
``p``  a free-form generator of a generic presentation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "AlphabetError",
    "ShapeError",
    "Letter",
    "D",
    "L",
    "R",
    "X",
    "P",
    "Word",
    "concat",
    "is_module_word",
    "OrderSpec",
    "compare",
    "compare_module_words",
    "render_word",
    "parse_word",
    "word_indices",
    "Less",
    "Equal",
    "Greater",
    "render_scalar",
    "Token",
]


class AlphabetError(ValueError):
    """A letter is not covered by the declared alphabet or precedence."""


class ShapeError(ValueError):
    """A word does not have the shape an operation requires."""


class Letter(NamedTuple):
    kind: str
    index: int = -1
    label: str = ""


Word = tuple  # tuple[Letter, ...]

D = Letter("d")


def L(n: int, a: str) -> Letter:
    return Letter("L", n, a)


def R(n: int, a: str) -> Letter:
    return Letter("R", n, a)


def X(a: str) -> Letter:
    return Letter("x", -1, a)


def P(name: str) -> Letter:
    return Letter("p", -1, name)


Less, Equal, Greater = -1, 0, 1


def concat(*words: Sequence[Letter]) -> Word:
    out: tuple = ()
    for w in words:
        out += tuple(w)
    return out


def is_module_word(w: Word) -> bool:
    """True for words ``u x`` with ``u`` operator-only and ``x`` a module generator."""
    if not w or w[-1].kind != "x":
        return False
    return all(l.kind != "x" for l in w[:-1])


def word_indices(w: Word) -> list[int]:
    return [l.index for l in w if l.kind in ("L", "R")]


# ---------------------------------------------------------------------------
# precedence tokens
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"^(?P<kind>[dLRxp])(?:\{(?P<idx>\d+|\*)\}|(?P<star>\*))?(?:\[(?P<lab>[^\]]+)\])?$"
)


@dataclass(frozen=True)
class Token:
    """One entry of a precedence list; ``None`` fields match anything."""

    kind: str
    index: int | None = None
    label: str | None = None

    def matches(self, l: Letter) -> bool:
        if l.kind != self.kind:
            return False
        if self.index is not None and l.index != self.index:
            return False
        if self.label is not None and l.label != self.label:
            return False
        return True

    @classmethod
    def parse(cls, text: str) -> "Token":
        text = text.strip()
        if text in ("d", "D"):
            return cls("d")
        m = _TOKEN_RE.match(text)
        if not m:
            raise ValueError(f"bad precedence token {text!r}")
        idx = m.group("idx")
        index = None if idx in (None, "*") else int(idx)
        return cls(m.group("kind"), index, m.group("lab"))

    def render(self) -> str:
        if self.kind == "d":
            return "d"
        s = self.kind
        s += "*" if self.index is None else "{%d}" % self.index
        if self.label is not None:
            s += "[%s]" % self.label
        return s


@dataclass(frozen=True)
class OrderSpec:
    """Monomial order: rank classes first, then deg-lex over a precedence.

    ``precedence`` lists tokens in ascending order; a letter takes the rank
    of the first token it matches and ties inside a token are broken by
    index, then by the position of the label in ``labels``.  With
    ``module_extension`` set, words ``u x`` are compared by ``u`` first and
    then by ``x``, and every operator word is below every module word.
    """

    labels: tuple[str, ...]
    precedence: tuple[Token, ...] = (Token("d"), Token("L"), Token("R"))
    rank_kinds: tuple[str, ...] = ("R",)
    module_extension: bool = True
    plain: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def standard(cls, labels: Iterable[str], **kw) -> "OrderSpec":
        return cls(tuple(labels), **kw)

    @classmethod
    def from_text(cls, labels: Iterable[str], precedence: str, rank: str = "R",
                  module_extension: bool = True) -> "OrderSpec":
        toks = tuple(Token.parse(t) for t in re.split(r"[<,]", precedence) if t.strip())
        kinds = tuple(k.strip() for k in rank.split(",") if k.strip())
        return cls(tuple(labels), toks, kinds, module_extension)

    def precedence_text(self) -> str:
        return " < ".join(t.render() for t in self.precedence)

    def label_rank(self, a: str) -> int:
        try:
            return self.labels.index(a)
        except ValueError:
            raise AlphabetError(f"unknown generator label {a!r}") from None

    def letter_key(self, l: Letter) -> tuple:
        key = self._cache.get(l)
        if key is not None:
            return key
        if l.kind == "p":
            if l.label not in self.plain:
                raise AlphabetError(f"unknown generator {l.label!r}")
            key = (len(self.precedence) + 1 + self.plain.index(l.label), -1, -1)
        else:
            if l.kind != "d":
                self.label_rank(l.label)
            for pos, tok in enumerate(self.precedence):
                if tok.matches(l):
                    lab = self.label_rank(l.label) if l.kind != "d" else -1
                    key = (pos, l.index, lab)
                    break
            else:
                if l.kind == "x":
                    key = (len(self.precedence), 0, self.label_rank(l.label))
                else:
                    raise AlphabetError(f"letter {render_word((l,))} not covered by precedence")
        self._cache[l] = key
        return key

    def _op_key(self, u: Word) -> tuple:
        counts = tuple(sum(1 for l in u if l.kind == k) for k in self.rank_kinds)
        return counts + (len(u), tuple(self.letter_key(l) for l in u))

    def key(self, w: Word) -> tuple:
        """Sort key realising the order; cached per word."""
        cache = self._cache
        k = cache.get(w)
        if k is not None:
            return k
        if not self.module_extension:
            k = self._op_key(w)
        else:
            nx = sum(1 for l in w if l.kind == "x")
            if nx == 0:
                k = (0, self._op_key(w))
            elif nx == 1 and w[-1].kind == "x":
                k = (1, self._op_key(w[:-1]), self.label_rank(w[-1].label))
            else:
                # only ever the left side of an annihilation rule
                k = (2, len(w), tuple(self.letter_key(l) for l in w))
        cache[w] = k
        return k


def compare(spec: OrderSpec, u: Word, v: Word) -> int:
    ku, kv = spec.key(tuple(u)), spec.key(tuple(v))
    return (ku > kv) - (ku < kv)


def compare_module_words(spec: OrderSpec, ux: Word, vy: Word) -> int:
    for w in (ux, vy):
        if not is_module_word(tuple(w)):
            raise ShapeError(f"{render_word(w)} is not of the form u·x")
    return compare(spec, ux, vy)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def _render_letter(l: Letter) -> str:
    if l.kind == "d":
        return "d"
    if l.kind in ("L", "R"):
        return "%s{%d}[%s]" % (l.kind, l.index, l.label)
    return l.label


def render_word(w: Sequence[Letter]) -> str:
    if not w:
        return "1"
    parts: list[str] = []
    i = 0
    while i < len(w):
        if w[i].kind == "d":
            j = i
            while j < len(w) and w[j].kind == "d":
                j += 1
            parts.append("d" if j - i == 1 else "d^%d" % (j - i))
            i = j
        else:
            parts.append(_render_letter(w[i]))
            i += 1
    return " ".join(parts)


_LETTER_RE = re.compile(r"d\^(\d+)|d|([LR])\{(\d+)\}\[([^\]\s]+)\]|([A-Za-z_][A-Za-z0-9_']*)")


def parse_word(text: str, module_labels: Iterable[str] = ()) -> Word:
    """Inverse of :func:`render_word`.  Bare names in ``module_labels`` are module generators."""
    text = text.strip()
    if text == "1":
        return ()
    mods = set(module_labels)
    out: list[Letter] = []
    pos = 0
    for tok in text.split():
        m = _LETTER_RE.fullmatch(tok)
        if not m:
            raise ValueError(f"bad letter {tok!r} at offset {pos}")
        if m.group(1):
            out.extend([D] * int(m.group(1)))
        elif tok == "d":
            out.append(D)
        elif m.group(2):
            out.append(Letter(m.group(2), int(m.group(3)), m.group(4)))
        else:
            name = m.group(5)
            out.append(X(name) if name in mods else P(name))
        pos += len(tok) + 1
    return tuple(out)


def render_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)
