"""Command-line front end: check, entail, glb, lub, sat, subsumes, dump-forest."""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import services
from .degrees import ONE, ZERO, format_degree, to_degree
from .kb import FuzzyKB
from .parser import ParseError, parse_concept, parse_kb, parse_query
from .tableau import ResourceLimit

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _load_kb(path: str) -> FuzzyKB:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_kb(text)


def _emit(args: argparse.Namespace, line: str) -> None:
    if not args.quiet:
        print(line)


def _oracle_check(kb: FuzzyKB, expected: bool) -> None:
    """Small-scale cross-check: search for a model and compare verdicts.
    A disagreement is a hard error; an inconclusive search is ignored."""
    from .oracle import search_model

    try:
        model = search_model(kb, max_domain=2, budget=200_000)
    except Exception:
        return
    if model is not None and not expected:
        raise AssertionError("oracle found a model for a KB judged inconsistent")


def _cmd_check(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb)
    result = services.consistency(kb, args.mode, args.budget_nodes)
    if args.oracle:
        _oracle_check(kb, result.consistent)
    _emit(args, "consistent" if result.consistent else "inconsistent")
    return EXIT_YES if result.consistent else EXIT_NO


def _cmd_entail(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb)
    query, bound = parse_query(args.assertion)
    if bound is None:
        raise ParseError("entail requires a bounded assertion, e.g. '... >= 0.5'", None)
    holds = services.entails(kb, query, bound, args.mode, args.budget_nodes)
    _emit(args, "entailed" if holds else "not-entailed")
    return EXIT_YES if holds else EXIT_NO


def _cmd_degree(args: argparse.Namespace, which: str) -> int:
    kb = _load_kb(args.kb)
    query, bound = parse_query(args.assertion)
    if bound is not None:
        raise ParseError(f"{which} takes an unbounded assertion, e.g. 'a : C'", None)
    fn = services.glb if which == "glb" else services.lub
    try:
        value = fn(kb, query, args.mode, args.budget_nodes)
    except services.InconsistentKB:
        _emit(args, "inconsistent-kb")
        return EXIT_NO
    _emit(args, format_degree(value))
    return EXIT_YES


def _cmd_sat(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb) if args.kb else FuzzyKB()
    concept = parse_concept(args.concept)
    if args.degree is not None:
        n = to_degree(args.degree)
        if not ZERO <= n <= ONE:
            raise ParseError("degree must lie in [0, 1]", None)
        ok = services.n_satisfiable(concept, n, kb, args.mode, args.budget_nodes)
    else:
        ok = services.satisfiable(concept, kb, args.mode, args.budget_nodes)
    _emit(args, "satisfiable" if ok else "unsatisfiable")
    return EXIT_YES if ok else EXIT_NO


def _cmd_subsumes(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb) if args.kb else FuzzyKB()
    sub = parse_concept(args.sub)
    sup = parse_concept(args.super)
    holds = services.subsumes(sup, sub, kb, args.mode, args.budget_nodes)
    _emit(args, "subsumed" if holds else "not-subsumed")
    return EXIT_YES if holds else EXIT_NO


def _cmd_dump_forest(args: argparse.Namespace) -> int:
    kb = _load_kb(args.kb)
    result = services.consistency(kb, args.mode, args.budget_nodes)
    forest = result.forest or result.solve_result.first_clash_forest
    text = forest.dump() if forest is not None else ""
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif not args.quiet:
        sys.stdout.write(text)
    return EXIT_YES if result.consistent else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fshin",
        description="Decision procedures for fuzzy description logic knowledge bases",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, kb_required: bool = True) -> None:
        if kb_required:
            p.add_argument("kb", help=".fkb file, or '-' for stdin")
        else:
            p.add_argument("kb", nargs="?", default=None, help=".fkb file, or '-' for stdin")
        p.add_argument("--mode", choices=["auto", "si", "shin", "gci"], default="auto")
        p.add_argument("--budget-nodes", type=int, default=services.DEFAULT_BUDGET)
        p.add_argument("--oracle", action="store_true", help="cross-check with the model-search oracle")
        p.add_argument("--seed", type=int, default=None, help=argparse.SUPPRESS)
        p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("check", help="decide ABox consistency")
    common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("entail", help="decide entailment of a bounded assertion")
    common(p)
    p.add_argument("--assert", dest="assertion", required=True)
    p.set_defaults(fn=_cmd_entail)

    p = sub.add_parser("glb", help="greatest lower bound of an assertion")
    common(p)
    p.add_argument("--assert", dest="assertion", required=True)
    p.set_defaults(fn=lambda a: _cmd_degree(a, "glb"))

    p = sub.add_parser("lub", help="least upper bound of an assertion")
    common(p)
    p.add_argument("--assert", dest="assertion", required=True)
    p.set_defaults(fn=lambda a: _cmd_degree(a, "lub"))

    p = sub.add_parser("sat", help="concept (n-)satisfiability")
    common(p, kb_required=False)
    p.add_argument("--concept", required=True)
    p.add_argument("--degree", default=None)
    p.set_defaults(fn=_cmd_sat)

    p = sub.add_parser("subsumes", help="crisp subsumption between concepts")
    common(p, kb_required=False)
    p.add_argument("--sub", required=True)
    p.add_argument("--super", required=True)
    p.set_defaults(fn=_cmd_subsumes)

    p = sub.add_parser("dump-forest", help="dump the final or first clashing forest")
    common(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_dump_forest)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except services.ModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit:
        print("error: node budget exceeded", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
