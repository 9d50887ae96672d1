"""Command-line interface.

Subcommands: analyze, reparam, io-equation, census, conjectures. All output
is deterministic for a fixed invocation; --json selects the stable
machine-readable form. Exit codes: 0 success, 1 no reparametrization
exists, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import census as census_mod
from .charpoly import image_dimension, io_equation_text
from .errors import CompidentError, NoReparametrization, TooManyEdges
from .exact import PRIME_MODE, RATIONAL_MODE
from .graphs import (
    CompartmentGraph,
    has_exchange,
    io_strong_component,
    is_inductively_strongly_connected,
    is_strongly_connected,
    parse_graph,
)
from .monomial import format_monomial
from .reparam import reparametrize


def _read_graph(path: str) -> CompartmentGraph:
    if path == "-":
        return parse_graph(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as handle:
        return parse_graph(handle.read())


def _parse_tree_flag(spec: str, graph: CompartmentGraph) -> list[tuple[int, int]]:
    """Parse --tree as comma-separated rate names, e.g. a12,a23,a34.

    The name a<i><j> denotes the edge j -> i; single-digit labels only, which
    covers every supported graph size.
    """
    if graph.n > 9:
        raise ValueError("--tree parameter names are only defined for n <= 9")
    edges = []
    for name in spec.split(","):
        name = name.strip()
        if len(name) != 3 or name[0] != "a" or not name[1:].isdigit():
            raise ValueError(f"bad tree entry {name!r}; expected a<i><j>")
        i, j = int(name[1]), int(name[2])
        edges.append((j, i))
    return edges


def _dump(doc) -> None:
    print(json.dumps(doc, indent=2))


def _mode(args) -> str:
    return RATIONAL_MODE if args.exact else PRIME_MODE


def _cmd_analyze(args) -> int:
    graph = _read_graph(args.graph)
    sc = is_strongly_connected(graph)
    reduced = None if sc else io_strong_component(graph)
    target = graph if sc else reduced
    report = image_dimension(target, trials=args.trials, seed=args.seed, mode=_mode(args))
    exchange = has_exchange(graph)
    isc = is_inductively_strongly_connected(graph)
    if args.json:
        doc = {
            "graph": {"n": graph.n, "edges": [list(e) for e in graph.edges]},
            "strongly_connected": sc,
            "exchange": exchange,
            "isc_ordering": list(isc) if isc else None,
            "reduced": None
            if reduced is None
            else {"n": reduced.n, "edges": [list(e) for e in reduced.edges]},
            "dimension": report.as_dict(),
        }
        _dump(doc)
        return 0
    print(f"graph: n={graph.n}, m={graph.m}")
    print(f"strongly connected: {'yes' if sc else 'no'}")
    if reduced is not None:
        print(f"input-output component: n={reduced.n}, edges={list(reduced.edges)}")
    print(f"exchange vertex: {exchange if exchange else 'none'}")
    print(
        "inductively strongly connected: "
        + (f"yes, ordering {','.join(map(str, isc))}" if isc else "no")
    )
    verdict = "expected" if report.verdict else "below expected"
    print(
        f"image dimension: d={report.d} of expected m+1={report.expected} "
        f"({verdict}; trials={report.trials}, seed={report.seed}, mode={report.mode})"
    )
    return 0


def _cmd_reparam(args) -> int:
    graph = _read_graph(args.graph)
    tree_edges = _parse_tree_flag(args.tree, graph) if args.tree else None
    try:
        result = reparametrize(
            graph,
            trials=args.trials,
            seed=args.seed,
            mode=_mode(args),
            tree_edges=tree_edges,
        )
    except NoReparametrization as exc:
        if args.json:
            _dump(
                {
                    "reparametrization": None,
                    "reason": "dimension",
                    "dimension": exc.report.as_dict(),
                }
            )
        else:
            print(
                "no identifiable scaling reparametrization exists: "
                f"d={exc.report.d}, expected m+1={exc.report.expected}"
            )
        return 1
    except TooManyEdges as exc:
        if args.json:
            _dump({"reparametrization": None, "reason": "edge-bound", "dimension": None})
        else:
            print(f"no identifiable scaling reparametrization exists: {exc}")
        return 1
    if args.json:
        _dump(result.to_json_dict())
        return 0
    print(f"spanning tree: {', '.join(graph.edge_param_name(k) for k in result.tree.edge_indices)}")
    for v in range(1, graph.n + 1):
        print(f"f_{v} = {result.f_monomial(v)}")
    print("reparametrized matrix:")
    for row in result.matrix_strings():
        print("  [" + ", ".join(row) + "]")
    print("cycle basis: " + ", ".join(f"q{t+1} = {c.monomial}" for t, c in enumerate(result.basis.cycles)))
    qnames = [f"q{t+1}" for t in range(len(result.basis.cycles))]
    for k, z in result.cycle_expressions.items():
        j, i = graph.edges[k]
        print(f"a{i}{j} -> {format_monomial(qnames, z)}")
    return 0


def _cmd_io_equation(args) -> int:
    graph = _read_graph(args.graph)
    text = io_equation_text(graph)
    if args.json:
        _dump({"equation": text})
    else:
        print(text)
    return 0


def _cmd_census(args) -> int:
    row = census_mod.census_row(
        args.n, args.m, seed=args.seed, trials=args.trials, mode=_mode(args), limit=args.limit
    )
    if args.json or args.detail:
        doc = row.as_dict()
        if args.detail:
            doc["classes"] = [
                {
                    "n": entry.representative.n,
                    "edges": [list(e) for e in entry.representative.edges],
                    "size": entry.size,
                    "expected": entry.expected,
                    "exchange": entry.exchange,
                    "isc": entry.isc,
                }
                for entry in census_mod.census_classes(
                    args.n,
                    args.m,
                    seed=args.seed,
                    trials=args.trials,
                    mode=_mode(args),
                    limit=args.limit,
                )
            ]
        _dump(doc)
    else:
        print(row.csv_header())
        print(row.csv_line())
    return 0


def _cmd_conjectures(args) -> int:
    reports = census_mod.test_conjectures(
        args.n, seed=args.seed, trials=args.trials, mode=_mode(args), limit=args.limit
    )
    if args.json:
        _dump([r.as_dict() for r in reports])
    else:
        for r in reports:
            status = "holds" if r.holds else f"{len(r.counterexamples)} counterexamples"
            print(f"{r.conjecture}: tested {r.tested}, {status}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    parser.add_argument(
        "--trials", type=int, default=2, help="random evaluation points per rank (default 2)"
    )
    parser.add_argument(
        "--exact",
        action="store_true",
        help="use exact rational arithmetic instead of the prime field",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compident",
        description="Identifiable scaling reparametrizations of linear compartment models",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural predicates and image dimension")
    p.add_argument("graph", help="graph JSON file, or - for stdin")
    _add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("reparam", help="construct a scaling reparametrization")
    p.add_argument("graph", help="graph JSON file, or - for stdin")
    p.add_argument(
        "--tree",
        help="spanning tree as comma-separated rate names, e.g. a12,a23,a34",
    )
    _add_common(p)
    p.set_defaults(func=_cmd_reparam)

    p = sub.add_parser("io-equation", help="print the input-output equation")
    p.add_argument("graph", help="graph JSON file, or - for stdin")
    _add_common(p)
    p.set_defaults(func=_cmd_io_equation)

    p = sub.add_parser("census", help="one (n, m) row of the census table")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--detail", action="store_true", help="include per-class detail (JSON)")
    p.add_argument("--limit", type=int, default=census_mod.DEFAULT_LIMIT, help="vertex guardrail")
    _add_common(p)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("conjectures", help="sweep the collapse conjectures")
    p.add_argument("n", type=int)
    p.add_argument("--limit", type=int, default=census_mod.DEFAULT_LIMIT, help="vertex guardrail")
    _add_common(p)
    p.set_defaults(func=_cmd_conjectures)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoReparametrization:
        return 1
    except (CompidentError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
