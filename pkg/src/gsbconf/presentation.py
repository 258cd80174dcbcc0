"""Presentation files: a line-oriented ``key = value`` format inside ``[section]`` headers.

Example::

    [generators]
    labels = v, h

    [locality]
    v,v = 2
    v,h = 1

    [brackets]
    [v,v] = (d + 2*lam) v

    [order]
    precedence = d < L*[v] < L*[h] < R*
    rank = R

    [caps]
    K = 8
    D = 6

    [task]
    task = envelope
    bound = 6
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .conformal import LocalityFunction
from .lie import LieConformalPresentation
from .poly import Polynomial
from .schema import Caps
from .words import OrderSpec, Token, Word, parse_word, render_scalar, render_word

__all__ = [
    "ParseError",
    "PresentationFile",
    "TASKS",
    "parse",
    "render",
    "parse_bracket",
    "render_bracket",
    "parse_polynomial",
]

TASKS = ("complete", "basis", "envelope", "speciality", "product")
SECTIONS = ("generators", "locality", "brackets", "order", "caps", "task", "relations", "product")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"line {line}:{col}: {message}" if line else message)


@dataclass
class PresentationFile:
    labels: tuple[str, ...]
    parity: dict[str, int] = field(default_factory=dict)
    locality: dict[tuple[str, str], int] | None = None
    brackets: dict[tuple[str, str], dict[str, dict[tuple[int, int], Fraction]]] | None = None
    precedence: str = "d < L* < R*"
    rank: str = "R"
    caps: Caps = field(default_factory=Caps)
    task: str = "complete"
    bound: int = 4
    relations: list[Polynomial] = field(default_factory=list)
    product: tuple[Polynomial, int, Polynomial] | None = None

    def spec(self) -> OrderSpec:
        return OrderSpec.from_text(self.labels, self.precedence, self.rank)

    def N(self) -> LocalityFunction | None:
        if self.locality is None:
            return None
        return LocalityFunction(self.labels, self.locality)

    def lie(self) -> LieConformalPresentation | None:
        if self.brackets is None:
            return None
        return LieConformalPresentation(self.labels, dict(self.brackets), dict(self.parity), self.N())


# ---------------------------------------------------------------------------
# lambda-polynomials: commuting d, lam, rationals, linear in generator labels
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")

# monomial key: (i, j, label or None) -> coefficient
_Poly = dict


class _ExprParser:
    def __init__(self, text: str, labels, line: int, col0: int):
        self.labels = set(labels)
        self.line, self.col0 = line, col0
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            if m.group(1):
                self.toks.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.toks.append(("name", m.group(2), m.start(2)))
            elif m.group(3):
                self.toks.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0
        self.text = text

    def error(self, msg: str, at: int | None = None):
        if at is None:
            at = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise ParseError(msg, self.line, self.col0 + at + 1)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, val=None):
        t = self.peek()
        if t is None or (val is not None and t[1] != val):
            self.error(f"expected {val!r}" if val else "unexpected end of expression")
        self.i += 1
        return t

    def parse(self) -> _Poly:
        p = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self) -> _Poly:
        sign = 1
        if self.peek() and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
        out = _scale(self.term(), sign)
        while self.peek() and self.peek()[1] in "+-":
            sign = -1 if self.take()[1] == "-" else 1
            out = _add(out, _scale(self.term(), sign))
        return out

    def term(self) -> _Poly:
        out = self.power()
        while True:
            t = self.peek()
            if t is None:
                return out
            if t[1] == "*":
                self.take()
                out = self.mul(out, self.power())
            elif t[1] == "/":
                at = self.take()[2]
                den = self.power()
                if set(den) != {(0, 0, None)}:
                    self.error("division by a non-constant", at)
                c = den[(0, 0, None)]
                out = _scale(out, Fraction(1) / c)
            elif t[0] in ("num", "name") or t[1] == "(":
                out = self.mul(out, self.power())
            else:
                return out

    def mul(self, p: _Poly, q: _Poly) -> _Poly:
        out: _Poly = {}
        for (i1, j1, c1), a in p.items():
            for (i2, j2, c2), b in q.items():
                if c1 is not None and c2 is not None:
                    self.error("bracket is not linear in the generators")
                k = (i1 + i2, j1 + j2, c1 or c2)
                out[k] = out.get(k, 0) + a * b
        return {k: v for k, v in out.items() if v}

    def power(self) -> _Poly:
        base = self.atom()
        if self.peek() and self.peek()[1] == "^":
            self.take()
            t = self.take()
            if t[0] != "num":
                self.error("exponent must be a non-negative integer", t[2])
            out = {(0, 0, None): Fraction(1)}
            for _ in range(int(t[1])):
                out = self.mul(out, base)
            return out
        return base

    def atom(self) -> _Poly:
        t = self.take()
        kind, val, at = t
        if kind == "num":
            return {(0, 0, None): Fraction(int(val))}
        if kind == "name":
            if val == "d":
                return {(1, 0, None): Fraction(1)}
            if val == "lam":
                return {(0, 1, None): Fraction(1)}
            if val not in self.labels:
                self.error(f"undeclared generator {val!r}", at)
            return {(0, 0, val): Fraction(1)}
        if val == "(":
            p = self.expr()
            self.take(")")
            return p
        if val == "-":
            return _scale(self.atom(), -1)
        self.error(f"unexpected {val!r}", at)


def _add(p: _Poly, q: _Poly) -> _Poly:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _scale(p: _Poly, c) -> _Poly:
    return {k: v * c for k, v in p.items() if v * c}


def parse_bracket(text: str, labels, line: int = 0, col: int = 0) -> dict[str, dict[tuple[int, int], Fraction]]:
    """``(d + 2*lam) v`` -> ``{"v": {(1, 0): 1, (0, 1): 2}}``."""
    ep = _ExprParser(text, labels, line, col)
    poly = ep.parse()
    out: dict = {}
    for (i, j, c), v in poly.items():
        if c is None:
            ep.error("constant term without a generator", 0)
        out.setdefault(c, {})[(i, j)] = v
    return out


def render_bracket(f: dict[str, dict[tuple[int, int], Fraction]], labels) -> str:
    terms = []
    for c in sorted(f, key=list(labels).index):
        for (i, j) in sorted(f[c], reverse=True):
            coeff = Fraction(f[c][(i, j)])
            factors = []
            if i:
                factors.append("d" if i == 1 else "d^%d" % i)
            if j:
                factors.append("lam" if j == 1 else "lam^%d" % j)
            factors.append(c)
            body = "*".join(factors)
            a = abs(coeff)
            if a != 1:
                body = "%s*%s" % (render_scalar(a), body)
            terms.append(("-" if coeff < 0 else "+", body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        s += " %s %s" % (sign, body)
    return s




def parse_polynomial(text: str, labels, line: int = 0, col: int = 0) -> Polynomial:
    """Rendered polynomial text such as ``d L{2}[v] v - 2*L{1}[v] v + 2*v``."""
    text = text.strip()
    if text == "0":
        return Polynomial.zero()
    parts = re.split(r"\s+([+-])\s+", text)
    signs = ["+"] + parts[1::2]
    bodies = parts[0::2]
    terms = []
    offset = 0
    for sign, body in zip(signs, bodies):
        at = text.find(body, offset)
        offset = at + len(body)
        b = body.strip()
        s = -1 if sign == "-" else 1
        if b.startswith("-"):
            s, b = -s, b[1:].strip()
        m = re.match(r"^(\d+(?:/\d+)?)\s*\*\s*(.+)$", b)
        coeff = Fraction(1)
        if m:
            coeff, b = Fraction(m.group(1)), m.group(2)
        elif re.fullmatch(r"\d+(?:/\d+)?", b):
            coeff, b = Fraction(b), "1"
        try:
            w = parse_word(b, labels)
        except ValueError as e:
            raise ParseError(str(e), line, col + at + 1) from None
        if any(l.kind == "p" for l in w):
            bad = next(l.label for l in w if l.kind == "p")
            raise ParseError(f"undeclared generator {bad!r}", line, col + at + 1)
        terms.append((w, s * coeff))
    return Polynomial(terms)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

_HEADER = re.compile(r"^\[([A-Za-z_]+)\]\s*$")
_PAIR = re.compile(r"^\s*\[?\s*([A-Za-z_][A-Za-z0-9_']*)\s*,\s*([A-Za-z_][A-Za-z0-9_']*)\s*\]?\s*$")


def _int(value: str, line: int, col: int, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {value!r}", line, col) from None


def parse(source: str) -> PresentationFile:
    """Parse a presentation file; errors carry line and column."""
    sections: dict[str, list[tuple[int, str, str, int, int]]] = {}
    current = None
    for ln, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _HEADER.match(line.strip())
        if m:
            current = m.group(1).lower()
            if current not in SECTIONS:
                raise ParseError(f"unknown section [{current}]", ln, raw.index("[") + 1)
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ParseError("entry outside of a section", ln, 1)
        if current == "relations":
            sections[current].append((ln, "", line.strip(), 1, len(raw) - len(raw.lstrip()) + 1))
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", ln, len(raw) - len(raw.lstrip()) + 1)
        key, value = line.split("=", 1)
        kcol = len(key) - len(key.lstrip()) + 1
        vcol = len(key) + 2 + (len(value) - len(value.lstrip()))
        sections[current].append((ln, key.strip(), value.strip(), kcol, vcol))

    gens = sections.get("generators", [])
    labels: tuple[str, ...] = ()
    parity: dict[str, int] = {}
    for ln, key, value, kc, vc in gens:
        if key == "labels":
            labels = tuple(x.strip() for x in value.split(",") if x.strip())
            for x in labels:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", x) or x in ("d", "lam"):
                    raise ParseError(f"bad generator label {x!r}", ln, vc)
        elif key == "parity":
            for item in value.split(","):
                if not item.strip():
                    continue
                if ":" not in item:
                    raise ParseError("parity entries look like 'label:0'", ln, vc)
                a, p = (s.strip() for s in item.split(":", 1))
                parity[a] = _int(p, ln, vc, "parity")
        else:
            raise ParseError(f"unknown key {key!r} in [generators]", ln, kc)
    if not labels:
        raise ParseError("no generators", gens[0][0] if gens else 0, 1)
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate generator label", gens[0][0], 1)
    for a, p in parity.items():
        if a not in labels:
            raise ParseError(f"undeclared generator {a!r} in parity", 0)
        if p not in (0, 1):
            raise ParseError(f"parity of {a!r} must be 0 or 1", 0)
    for a in labels:
        parity.setdefault(a, 0)

    def pair(key: str, ln: int, kc: int) -> tuple[str, str]:
        m = _PAIR.match(key)
        if not m:
            raise ParseError(f"expected a generator pair, got {key!r}", ln, kc)
        for x in m.groups():
            if x not in labels:
                raise ParseError(f"undeclared generator {x!r}", ln, kc + key.index(x))
        return m.group(1), m.group(2)

    locality = None
    if "locality" in sections:
        locality = {}
        for ln, key, value, kc, vc in sections["locality"]:
            a, b = pair(key, ln, kc)
            n = _int(value, ln, vc, "locality")
            if n < 0:
                raise ParseError(f"negative locality N({a},{b}) = {n}", ln, vc)
            locality[(a, b)] = n
        # unspecified pairs default to 0 (the product vanishes)
        for a in labels:
            for b in labels:
                locality.setdefault((a, b), 0)

    brackets = None
    if "brackets" in sections:
        brackets = {}
        for ln, key, value, kc, vc in sections["brackets"]:
            a, b = pair(key, ln, kc)
            f = parse_bracket(value, labels, ln, vc - 1)
            if f:
                brackets[(a, b)] = f

    precedence, rank = "d < L* < R*", "R"
    for ln, key, value, kc, vc in sections.get("order", []):
        if key == "precedence":
            try:
                toks = [Token.parse(t) for t in re.split(r"[<,]", value) if t.strip()]
            except ValueError as e:
                raise ParseError(str(e), ln, vc) from None
            for kind in ("d", "L", "R"):
                if not any(t.kind == kind for t in toks):
                    raise ParseError(f"precedence does not cover {kind!r} letters", ln, vc)
            precedence = " < ".join(t.render() for t in toks)
        elif key == "rank":
            rank = ", ".join(x.strip() for x in value.split(",") if x.strip())
        else:
            raise ParseError(f"unknown key {key!r} in [order]", ln, kc)

    K, D, KN = 8, 6, 3
    for ln, key, value, kc, vc in sections.get("caps", []):
        v = _int(value, ln, vc, key)
        if v < 0:
            raise ParseError(f"cap {key} must be non-negative", ln, vc)
        if key == "K":
            K = v
        elif key == "D":
            D = v
        elif key == "KN":
            KN = v
        else:
            raise ParseError(f"unknown cap {key!r}", ln, kc)

    task, bound = "complete", 4
    for ln, key, value, kc, vc in sections.get("task", []):
        if key == "task":
            if value not in TASKS:
                raise ParseError(f"unknown task {value!r}", ln, vc)
            task = value
        elif key == "bound":
            bound = _int(value, ln, vc, "bound")
        else:
            raise ParseError(f"unknown key {key!r} in [task]", ln, kc)

    relations = [parse_polynomial(v, labels, ln, vc) for ln, _, v, _, vc in sections.get("relations", [])]

    product = None
    if "product" in sections:
        got = {key: (ln, value, vc) for ln, key, value, kc, vc in sections["product"]}
        for k in ("x", "n", "y"):
            if k not in got:
                raise ParseError(f"[product] needs '{k}'", sections["product"][0][0], 1)
        x = parse_polynomial(got["x"][1], labels, got["x"][0], got["x"][2])
        y = parse_polynomial(got["y"][1], labels, got["y"][0], got["y"][2])
        product = (x, _int(got["n"][1], got["n"][0], got["n"][2], "n"), y)

    return PresentationFile(labels, parity, locality, brackets, precedence, rank,
                            Caps(K, D, KN), task, bound, relations, product)


def render(p: PresentationFile) -> str:
    """Canonical text; ``parse(render(p)) == p``."""
    out = ["[generators]", "labels = " + ", ".join(p.labels)]
    if any(p.parity.get(a) for a in p.labels):
        out.append("parity = " + ", ".join("%s:%d" % (a, p.parity.get(a, 0)) for a in p.labels))
    if p.locality is not None:
        out += ["", "[locality]"]
        out += ["%s,%s = %d" % (a, b, p.locality[(a, b)]) for a in p.labels for b in p.labels]
    if p.brackets is not None:
        out += ["", "[brackets]"]
        for a in p.labels:
            for b in p.labels:
                if (a, b) in p.brackets:
                    out.append("[%s,%s] = %s" % (a, b, render_bracket(p.brackets[(a, b)], p.labels)))
    out += ["", "[order]", "precedence = " + p.precedence, "rank = " + p.rank]
    out += ["", "[caps]", "K = %d" % p.caps.max_index, "D = %d" % p.caps.max_degree,
            "KN = %d" % p.caps.max_locality]
    out += ["", "[task]", "task = " + p.task, "bound = %d" % p.bound]
    if p.relations:
        out += ["", "[relations]"] + [r.render() for r in p.relations]
    if p.product is not None:
        x, n, y = p.product
        out += ["", "[product]", "x = " + x.render(), "n = %d" % n, "y = " + y.render()]
    return "\n".join(out) + "\n"
