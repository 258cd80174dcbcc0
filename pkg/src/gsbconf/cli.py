"""Command-line driver: ``gsb <task> <file> [--cap-index K] [--cap-degree D] [--bound B] [--trace PATH]``.

Exit status is 0 on success, 2 when the verdict is undetermined because
of cap saturation, and 1 on errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field, replace

from .conformal import ConformalAlgebra, build_MXN, enumerate_normal_words, free_conformal_module
from .engine import complete, interreduce
from .lie import NotSpecial, Special, Undetermined, envelope, speciality_search
from .module import module_alphabet, reduced_module_words, split_null_extension
from .poly import RewriteRule
from .presentation import TASKS, ParseError, PresentationFile, parse
from .schema import Caps
from .words import render_word

__all__ = ["ResultReport", "run", "main"]

EXIT_OK, EXIT_ERROR, EXIT_UNDETERMINED = 0, 1, 2


@dataclass
class ResultReport:
    task: str
    lines: list[str] = field(default_factory=list)
    rules: list[str] = field(default_factory=list)
    basis: list[str] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)
    saturation: str = "clean"
    timing: float = 0.0
    exit_code: int = EXIT_OK

    def text(self, timing: bool = True) -> str:
        out = ["task: " + self.task] + self.lines
        if self.rules:
            out.append("rules:")
            out += ["  " + r for r in self.rules]
        if self.basis:
            out.append("basis: %d words" % len(self.basis))
            out += ["  " + w for w in self.basis]
        out.append("saturation: " + self.saturation)
        if timing:
            out.append("time: %.3fs" % self.timing)
        return "\n".join(out) + "\n"


def _rule_line(r: RewriteRule, spec) -> str:
    return "%s: %s" % (r.name, r.poly.render(spec))


def _verdict(v, spec) -> str:
    if isinstance(v, NotSpecial):
        return "NotSpecial(%s)" % v.witness.poly.render(spec)
    return str(v)


def _free_rules(p: PresentationFile, caps: Caps):
    """Closed rules of Conf(X,N), completed together with the file's relations."""
    spec, N = p.spec(), p.N()
    base = free_conformal_module(p.labels, N, spec)
    S = [RewriteRule.from_poly(q, spec, "S%d" % (i + 1)) for i, q in enumerate(p.relations) if q]
    rules = split_null_extension(base.with_rules(S))
    if not S:
        return rules, None
    res = complete(rules, caps, module_alphabet(p.labels, caps))
    return res.closed, res


def run(p: PresentationFile, task: str | None = None, caps: Caps | None = None,
        bound: int | None = None) -> ResultReport:
    task = task or p.task
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    caps = caps or p.caps
    bound = p.bound if bound is None else bound
    spec = p.spec()
    lie = p.lie()
    rep = ResultReport(task)
    rep.lines.append("generators: " + ", ".join(p.labels))
    rep.lines.append("order: " + spec.precedence_text() + " (rank: %s)" % p.rank)
    rep.lines.append("caps: K=%d D=%d" % (caps.max_index, caps.max_degree))
    t0 = time.perf_counter()

    if task in ("envelope", "speciality") and lie is None:
        raise ValueError(f"task {task!r} needs a [brackets] section")
    if task != "speciality" and p.locality is None:
        raise ValueError(f"task {task!r} needs a [locality] section")

    if task == "complete":
        if lie is not None:
            result = envelope(lie, p.N(), spec, caps, relations=p.relations)
            comp, new = result.completion, result.new_rules
            base_rules = result.presentation.module_rules
        elif p.relations:
            _, comp = _free_rules(p, caps)
            new, base_rules = interreduce(comp), []
        else:
            pres = build_MXN(p.labels, p.N(), spec)
            comp = complete(split_null_extension(pres), caps, module_alphabet(p.labels, caps))
            new, base_rules = interreduce(comp), []
        rep.lines.append("compositions: %d" % comp.report.compositions)
        rep.lines.append("new rules: %d" % len(new))
        rep.rules = [_rule_line(r, spec) for r in list(base_rules) + list(new)]
        rep.trace = [e.line() for e in comp.trace]
        rep.saturation = comp.report.render()

    elif task == "basis":
        if lie is not None:
            result = envelope(lie, p.N(), spec, caps, bound=bound, relations=p.relations)
            words = result.basis_words
            rep.saturation = result.completion.report.render()
            rep.trace = [e.line() for e in result.completion.trace]
        elif p.relations:
            closed, comp = _free_rules(p, caps)
            words = reduced_module_words(closed, p.labels, bound, caps.max_index)
            rep.saturation = comp.report.render()
            rep.trace = [e.line() for e in comp.trace]
        else:
            words = enumerate_normal_words(p.labels, p.N(), bound, spec)
        rep.lines.append("bound: %d" % bound)
        rep.basis = [render_word(w) for w in words]

    elif task == "envelope":
        result = envelope(lie, p.N(), spec, caps, bound=bound, relations=p.relations)
        rep.lines.append("compositions: %d" % result.completion.report.compositions)
        rep.lines.append("new rules: %d" % len(result.new_rules))
        for r in result.new_rules:
            rep.lines.append("  new: " + r.poly.render(spec))
        rep.lines.append("speciality: " + _verdict(result.speciality, spec))
        rep.rules = [_rule_line(r, spec) for r in result.closed_rules]
        rep.basis = [render_word(w) for w in result.basis_words]
        rep.trace = [e.line() for e in result.completion.trace]
        rep.saturation = result.completion.report.render()
        if isinstance(result.speciality, Undetermined):
            rep.exit_code = EXIT_UNDETERMINED

    elif task == "speciality":
        if p.locality is not None:
            result = envelope(lie, p.N(), spec, caps, relations=p.relations)
            verdict = result.speciality
            rep.saturation = result.completion.report.render()
            rep.trace = [e.line() for e in result.completion.trace]
        else:
            tried = speciality_search(lie, caps.max_locality, spec, caps)
            for N, v in tried:
                rep.lines.append("  N(%s): %s" % (", ".join(
                    "%s,%s=%d" % (a, b, n) for (a, b), n in N.table.items()), _verdict(v, spec)))
            verdict = tried[-1][1]
            if not isinstance(verdict, Special):
                verdict = Undetermined("no special N with values <= %d" % caps.max_locality)
        rep.lines.append("speciality: " + _verdict(verdict, spec))
        if isinstance(verdict, Undetermined):
            rep.exit_code = EXIT_UNDETERMINED

    elif task == "product":
        if p.product is None:
            raise ValueError("task 'product' needs a [product] section")
        x, n, y = p.product
        if lie is not None:
            rules = envelope(lie, p.N(), spec, caps, relations=p.relations).completion.closed
        else:
            rules, _ = _free_rules(p, caps)
        alg = ConformalAlgebra(p.labels, p.N(), spec, rules, max_index=max(caps.max_index, 16))
        value = alg.product(x, n, y)
        rep.lines.append("(%s) o%d (%s) = %s" % (x.render(spec), n, y.render(spec), value.render(spec)))

    rep.timing = time.perf_counter() - t0
    return rep


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="gsb", description="Groebner-Shirshov bases for conformal algebras")
    ap.add_argument("task", choices=TASKS)
    ap.add_argument("file")
    ap.add_argument("--cap-index", type=int, dest="K")
    ap.add_argument("--cap-degree", type=int, dest="D")
    ap.add_argument("--bound", type=int)
    ap.add_argument("--trace", metavar="PATH")
    ap.add_argument("--no-timing", action="store_true", help="omit the timing line")
    args = ap.parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            p = parse(fh.read())
        caps = p.caps
        if args.K is not None:
            caps = replace(caps, max_index=args.K)
        if args.D is not None:
            caps = replace(caps, max_degree=args.D)
        rep = run(p, args.task, caps, args.bound)
    except ParseError as e:
        print(f"{args.file}:{e}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(rep.text(timing=not args.no_timing))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("".join(line + "\n" for line in rep.trace))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
