"""Command line entry point.

Exit codes: 0 success, 1 usage or parse error, 2 pair budget exceeded,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..cgs import CGSConfig, CGSError, compute_cgs, verify_system
from ..discover import IndependenceError, VariablePartition, classify_statement, discover
from ..gb import Budget, BudgetExceeded, budget_scope, dimension, UnitIdealError
from .geometry import compile_geometry
from .ideal_file import Problem, parse_ideal_file
from .parser import ParseError
from .render import render_report

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_problem(path: str | Path) -> Problem:
    """Read a ``.geo`` construction or a raw ideal file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    prob = compile_geometry(text) if path.suffix == ".geo" else parse_ideal_file(text)
    prob.name = path.stem
    return prob


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-pairs", type=int, default=None, metavar="N", help="cap on S-pairs per basis")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--depth", type=int, default=64, help="maximum CGS recursion depth")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="geodisc", description="Comprehensive Groebner systems and geometry theorem discovery.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gb", parents=[common], help="reduced Groebner basis of H + T")
    g.add_argument("file")

    c = sub.add_parser("cgs", parents=[common], help="comprehensive Groebner system of H + T")
    c.add_argument("file")
    c.add_argument("--no-merge", action="store_true", help="keep the raw branching segments")
    c.add_argument("--dot", metavar="OUT", help="also write a DOT graph")
    c.add_argument("--json", action="store_true")
    c.add_argument("--verify", type=int, default=0, metavar="N", help="check N sampled points per cell")

    d = sub.add_parser("discover", parents=[common], help="necessary and sufficient conditions")
    d.add_argument("file")
    d.add_argument("--classify", action="store_true", help="also classify the statement and prove on cells")
    d.add_argument("--json", action="store_true")

    r = sub.add_parser("prove", parents=[common], help="classify the statement H => T")
    r.add_argument("file")
    r.add_argument("--json", action="store_true")
    return p


def _run(args) -> int:
    prob = load_problem(args.file)
    config = CGSConfig(max_depth=args.depth, budget=Budget(args.budget_pairs), merge=not getattr(args, "no_merge", False))
    ideal = prob.H + prob.T if prob.T.generators else prob.H
    out = sys.stdout

    if args.command == "gb":
        G = ideal.groebner()
        for g in G.elements:
            out.write(f"{g}\n")
        try:
            dim, witness = dimension(ideal)
            out.write(f"# dimension {dim}, independent {{{', '.join(witness)}}}\n")
        except UnitIdealError:
            out.write("# unit ideal\n")
        return EXIT_OK

    if args.command == "cgs":
        part = VariablePartition.of(prob.ring, prob.U)
        ring = part.ring(prob.ring)
        gs = compute_cgs(ideal.to_ring(ring), ring, prob.null, prob.nonnull, config)
        out.write(render_report(gs, "json" if args.json else "table"))
        if args.dot:
            Path(args.dot).write_text(render_report(gs, "dot"), encoding="utf-8")
        if args.verify:
            bad = verify_system(gs, args.verify, args.seed)
            for msg in bad:
                sys.stderr.write(f"verify: {msg}\n")
            if bad:
                return EXIT_INTERNAL
            sys.stderr.write(f"verify: {len(gs)} segments sound at sampled points\n")
        return EXIT_OK

    if args.command == "discover":
        if not prob.T.generators:
            raise ParseError("discover needs a thesis T")
        report = discover(
            prob.H, prob.T, prob.U, prob.Uprime, prob.null, prob.nonnull, classify=args.classify, config=config
        )
        out.write(render_report(report, "json" if args.json else "table"))
        return EXIT_OK

    if args.command == "prove":
        if not prob.T.generators:
            raise ParseError("prove needs a thesis T")
        cls = classify_statement(prob.H, prob.T, prob.U, config)
        if args.json:
            import json

            doc = {"statement_class": str(cls), "cells": [c.as_json() for c in cls.region]}
            out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        else:
            out.write(f"{cls}\n")
            for c in cls.region:
                out.write(f"  on {c.describe()}\n")
        return EXIT_OK
    return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        with budget_scope(Budget(args.budget_pairs)):
            return _run(args)
    except (ParseError, OSError, KeyError, IndependenceError) as e:
        sys.stderr.write(f"geodisc: {e}\n")
        return EXIT_USAGE
    except BudgetExceeded as e:
        sys.stderr.write(f"geodisc: {e}\n")
        return EXIT_BUDGET
    except (CGSError, AssertionError) as e:
        sys.stderr.write(f"geodisc: internal error: {e}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
