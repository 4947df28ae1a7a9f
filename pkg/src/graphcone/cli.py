"""Command-line front end.

Graph arguments are file paths, ``-`` for standard input, or the name of a
bundled fixture.  Exit status is 0 on success, 1 when a computation fails
or a check comes out false, and 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import os
import sys
import warnings
from typing import Sequence

from .cone import ConeElement, format_element, parse_element, sum_elements
from .decompose import decompose
from .errors import GraphConeError, GraphParseError
from .fixtures import FIXTURES, load_fixture
from .generators import METHODS, minimal_generators, network_elements, verify_relation
from .graph import TrivalentGraph, classify_edges, format_graph, invariants, parse_graph
from .hilbert import PAPER_LITERAL_NOTE, hilbert_brute, hilbert_compose, hilbert_series_table, verify_mutation_invariance
from .mutation import MutationStep, caterpillar_normal_form, mutate


class UsageError(Exception):
    pass


def _read_graph(arg: str) -> TrivalentGraph:
    if arg == "-":
        return parse_graph(sys.stdin.read())
    if not os.path.exists(arg) and arg in FIXTURES:
        return load_fixture(arg)
    try:
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {arg}: {exc.strerror}") from None
    return parse_graph(text)


def _leaves(raw: str | None) -> tuple[str, ...]:
    if not raw:
        return ()
    return tuple(x for x in raw.split(",") if x)


def _parse_term(text: str) -> list[ConeElement]:
    count, star, rest = text.partition("*")
    if star and count.strip().isdigit():
        return [parse_element(rest)] * int(count)
    return [parse_element(text)]


def _steps_from(lines: Sequence[str]) -> list[MutationStep]:
    steps = []
    for line in lines:
        s = line.strip().lstrip("#").strip()
        if s.startswith("mutate "):
            steps.append(MutationStep.parse(s))
    return steps


def _emit_steps_and_graph(steps: Sequence[MutationStep], g: TrivalentGraph) -> str:
    return "".join(f"# {s}\n" for s in steps) + format_graph(g)


# -- verbs ----------------------------------------------------------------------


def cmd_info(args) -> int:
    g = _read_graph(args.graph)
    print(invariants(g))
    if args.edges:
        for e, info in classify_edges(g).items():
            tag = info.tag + (" petiole" if info.petiole and info.tag != "petiole" else "")
            print(f"{e} {tag}")
    return 0


def cmd_networks(args) -> int:
    g = _read_graph(args.graph)
    nets = network_elements(g)
    print(f"# {len(nets)} networks")
    for w in nets:
        print(format_element(w))
    return 0


def cmd_generators(args) -> int:
    g = _read_graph(args.graph)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        gens = minimal_generators(g, args.degree_cap, method=args.method, threads=args.threads)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    for d, xs in sorted(gens.by_degree().items()):
        print(f"# degree {d}: {len(xs)} generators")
        for x in xs:
            print(format_element(x))
    return 0


def cmd_decompose(args) -> int:
    g = _read_graph(args.graph)
    dec = decompose(g, parse_element(args.element))
    print(f"# {len(dec)} parts")
    for p in dec:
        print(format_element(p))
    return 0


def cmd_hilbert(args) -> int:
    g = _read_graph(args.graph)
    axes = _leaves(args.leaves)
    if args.paper_literal and args.method != "compose":
        raise UsageError("--paper-literal only applies to --method compose")
    if args.method == "brute":
        table = hilbert_brute(g, args.max_degree, axes, threads=args.threads)
    elif args.method == "compose":
        if args.paper_literal:
            print(f"warning: {PAPER_LITERAL_NOTE}", file=sys.stderr)
        table = hilbert_compose(g, args.max_degree, axes, paper_literal=args.paper_literal)
    else:
        table = hilbert_series_table(g, args.max_degree, axes)
    if args.format == "json":
        print(table.to_json())
    else:
        sys.stdout.write(table.to_text())
    return 0


def cmd_mutate(args) -> int:
    g = _read_graph(args.graph)
    if args.replay is not None:
        if args.edge is not None:
            raise UsageError("give either --edge or --replay, not both")
        if args.replay == "-":
            lines = sys.stdin.read().splitlines()
        else:
            try:
                with open(args.replay, encoding="utf-8") as fh:
                    lines = fh.read().splitlines()
            except OSError as exc:
                raise UsageError(f"cannot read {args.replay}: {exc.strerror}") from None
        steps = _steps_from(lines)
    elif args.edge is not None:
        steps = [MutationStep(args.edge, args.variant)]
    else:
        raise UsageError("mutate needs --edge or --replay")
    for s in steps:
        g = mutate(g, s)
    sys.stdout.write(_emit_steps_and_graph(steps, g))
    return 0


def cmd_normalize(args) -> int:
    g = _read_graph(args.graph)
    h, steps = caterpillar_normal_form(g)
    sys.stdout.write(_emit_steps_and_graph(steps, h))
    return 0


def cmd_verify_equivalence(args) -> int:
    g1 = _read_graph(args.graph1)
    g2 = _read_graph(args.graph2)
    s2 = _leaves(args.leaves2) if args.leaves2 is not None else None
    ok, report = verify_mutation_invariance(g1, g2, args.max_degree, _leaves(args.leaves), s2)
    print(("equivalent: " if ok else "not equivalent: ") + report)
    return 0 if ok else 1


def cmd_relation(args) -> int:
    g = _read_graph(args.graph)
    lhs = [x for t in args.lhs for x in _parse_term(t)]
    rhs = [x for t in args.rhs for x in _parse_term(t)]
    ok = verify_relation(g, lhs, rhs)
    print(f"lhs: {format_element(sum_elements(lhs))}")
    print(f"rhs: {format_element(sum_elements(rhs))}")
    print("relation holds" if ok else "relation fails")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphcone", description="Cones, generators and Hilbert tables of trivalent graphs.")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def graph_verb(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph", help="graph file, '-' for stdin, or a fixture name")
        p.set_defaults(func=func)
        return p

    p = graph_verb("info", cmd_info, "print invariants")
    p.add_argument("--edges", action="store_true", help="also list the class of every edge")
    graph_verb("networks", cmd_networks, "list the networks (degree-1 points)")

    p = graph_verb("generators", cmd_generators, "minimal generators of the cone")
    p.add_argument("--degree-cap", type=int, default=4)
    p.add_argument("--method", choices=("auto",) + METHODS, default="auto")
    p.add_argument("--threads", type=int, default=1)

    p = graph_verb("decompose", cmd_decompose, "write a cone point as a sum of generators")
    p.add_argument("element", help="cone point as deg=<m>;<edge>=<value>,...")

    p = graph_verb("hilbert", cmd_hilbert, "multigraded Hilbert table")
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--method", choices=("brute", "compose", "series"), default="brute")
    p.add_argument("--leaves", default="", help="comma-separated leaf axes")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("--paper-literal", action="store_true", help="use the one-factor balloon series 1/((1-t)(1-s^2 t^2)), which disagrees with the counts")
    p.add_argument("--threads", type=int, default=1)

    p = graph_verb("mutate", cmd_mutate, "apply mutation steps")
    p.add_argument("--edge")
    p.add_argument("--variant", type=int, choices=(1, 2), default=1)
    p.add_argument("--replay", help="file (or '-') whose '# mutate <edge> <variant>' lines are applied in order")

    graph_verb("normalize", cmd_normalize, "caterpillar normal form with its mutation sequence")

    p = sub.add_parser("verify-equivalence", help="compare Hilbert tables of two graphs")
    p.add_argument("graph1")
    p.add_argument("graph2")
    p.add_argument("--max-degree", type=int, default=5)
    p.add_argument("--leaves", default="", help="leaf axes of the first graph")
    p.add_argument("--leaves2", default=None, help="leaf axes of the second graph (default: induced by normal forms)")
    p.set_defaults(func=cmd_verify_equivalence)

    p = graph_verb("relation", cmd_relation, "check a semigroup relation among cone points")
    p.add_argument("--lhs", action="append", required=True, help="term, optionally prefixed 'k*'; repeatable")
    p.add_argument("--rhs", action="append", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GraphConeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
