"""Command-line interface.

Exit codes: 0 success, 2 graph parse error, 3 argument error, 4 soundness
violation found by ``compare``.  JSON goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from .detector import (
    detect_cycles,
    detect_paths,
    hamiltonian_cycle,
    hamiltonian_path,
    language,
)
from .graph import Digraph, GraphParseError, GraphPopulation, parse_graph
from .miner import SOUNDNESS, audit_graph, bench_powers, sweep
from .oracle import DEFAULT_CAP, bridge_set, oracle_k_cycles, oracle_k_paths

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_ARGS = 3
EXIT_UNSOUND = 4


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _read_graph(path: str) -> Digraph:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ArgumentError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _k_range(args, n: int) -> tuple[int, int]:
    lo = args.k_min if args.k_min is not None else 1
    hi = args.k_max if args.k_max is not None else n
    if args.k is not None:
        lo = hi = args.k
    if not 1 <= lo <= hi:
        raise ArgumentError(f"invalid k range [{lo}, {hi}]")
    return lo, hi


def _vertex(value: Optional[int], n: int, flag: str) -> int:
    if value is None:
        raise ArgumentError(f"{flag} is required")
    if not 1 <= value <= n:
        raise ArgumentError(f"{flag} must lie in 1..{n}, got {value}")
    return value - 1


def cmd_detect(args) -> int:
    g = _read_graph(args.graph)
    text = args.format == "text"
    if args.mode == "hamiltonian":
        if g.n < 2:
            raise ArgumentError("hamiltonian mode needs at least 2 vertices")
        paths = hamiltonian_path(g)
        cycle = hamiltonian_cycle(g)
        if text:
            print(paths.to_text())
            print(f"hamiltonian cycle: {'yes' if cycle else 'no'}")
        else:
            _emit({"kind": "hamiltonian", "n": g.n, "path": paths.to_json(), "cycle": cycle})
        return EXIT_OK
    if args.k is None or args.k < 1:
        raise ArgumentError("--k >= 1 is required for path and cycle modes")
    report = detect_paths(g, args.k) if args.mode == "path" else detect_cycles(g, args.k)
    if text:
        print(report.to_text())
    else:
        _emit(report.to_json())
    return EXIT_OK


def cmd_language(args) -> int:
    g = _read_graph(args.graph)
    lang = language(g)
    if args.format == "text":
        for rep in lang.paths + lang.cycles:
            print(rep.to_text())
    else:
        _emit(lang.to_json())
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _read_graph(args.graph)
    if args.k is None or args.k < 1:
        raise ArgumentError("--k >= 1 is required")
    i = _vertex(args.i, g.n, "--i")
    if args.mode == "cycle":
        q = oracle_k_cycles(g, i, args.k)
        _emit({"exists": q.exists, "count": q.count})
        return EXIT_OK
    j = _vertex(args.j, g.n, "--j")
    if i == j:
        raise ArgumentError("path queries need --i != --j; use --mode cycle")
    q = oracle_k_paths(g, i, j, args.k, cap=args.cap)
    out = {"exists": q.exists, "count": q.count, "bridge": str(bridge_set(g, i, j, args.k))}
    if args.samples:
        out["samples"] = [s.one_based() for s in q.samples]
    _emit(out)
    return EXIT_OK


def cmd_compare(args) -> int:
    g = _read_graph(args.graph)
    lo, hi = _k_range(args, g.n)
    hi = min(hi, g.n)
    if lo > hi:
        raise ArgumentError(f"k range must intersect [1, {g.n}]")
    audit = audit_graph(g, (lo, hi), check_invariants=False)
    if args.format == "text":
        for rec in audit.records:
            where = f"({rec.i},{rec.j})" if rec.j is not None else f"({rec.i})"
            print(f"{rec.kind:5} k={rec.k} {where:8} {rec.direction:24} detector={rec.detector_value} oracle={rec.oracle_value}")
    else:
        _emit(
            {
                "k_range": [lo, hi],
                "totals": {d: t.to_json() for d, t in audit.totals.items()},
                "disagreements": [json.loads(r.to_json()) for r in audit.records],
            }
        )
    unsound = audit.totals[SOUNDNESS].violations
    if unsound:
        print(f"{unsound} soundness violation(s)", file=sys.stderr)
        return EXIT_UNSOUND
    return EXIT_OK


def _populations(args) -> list[GraphPopulation]:
    if args.exhaustive is not None:
        return [GraphPopulation.exhaustive(n, loops=not args.no_loops) for n in range(1, args.exhaustive + 1)]
    if args.n is None:
        raise ArgumentError("mine needs --exhaustive N or --n N (random)")
    return [
        GraphPopulation.random(args.n, p, args.seed + idx * args.count, args.count, loops=args.loops)
        for idx, p in enumerate(args.p)
    ]


def cmd_mine(args) -> int:
    try:
        pops = _populations(args)
    except ValueError as exc:
        raise ArgumentError(str(exc)) from None
    fh = open(args.findings, "w") if args.findings else None
    runs = []
    unsound = 0
    try:
        for pop in pops:
            kr = None
            if args.k_max is not None or args.k_min is not None:
                kr = (args.k_min or 1, min(args.k_max or pop.n, pop.n))
                if kr[0] > pop.n:
                    continue
            sink = (lambda rec: fh.write(rec.to_json() + "\n")) if fh else (lambda rec: None)
            try:
                summary, _ = sweep(pop, kr, workers=args.workers, sink=sink)
            except ValueError as exc:
                raise ArgumentError(str(exc)) from None
            runs.append(summary.to_json())
            unsound += summary.soundness_violations
    finally:
        if fh:
            fh.close()
    _emit({"runs": runs, "findings": args.findings, "soundness_violations": unsound})
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        table = bench_powers(sorted(args.n), reps=args.reps)
    except ValueError as exc:
        raise ArgumentError(str(exc)) from None
    if args.format == "text":
        print(table.to_text())
    else:
        _emit(table.to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="setpath", description="Set-matrix path/cycle detection with a brute-force audit.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_arg(sp):
        sp.add_argument("graph", help="edge-list or JSON graph file, '-' for stdin")

    def fmt_arg(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")

    d = sub.add_parser("detect", help="path matrix, cycle vector or Hamiltonian verdict")
    graph_arg(d)
    d.add_argument("--mode", choices=("path", "cycle", "hamiltonian"), default="path")
    d.add_argument("--k", type=int)
    fmt_arg(d)
    d.set_defaults(func=cmd_detect)

    lang = sub.add_parser("language", help="every path matrix and cycle vector")
    graph_arg(lang)
    fmt_arg(lang)
    lang.set_defaults(func=cmd_language)

    o = sub.add_parser("oracle", help="brute-force path/cycle query (1-based vertices)")
    graph_arg(o)
    o.add_argument("--mode", choices=("path", "cycle"), default="path")
    o.add_argument("--i", type=int)
    o.add_argument("--j", type=int)
    o.add_argument("--k", type=int)
    o.add_argument("--cap", type=int, default=DEFAULT_CAP)
    o.add_argument("--samples", action="store_true", help="include the enumerated paths")
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("compare", help="detector vs oracle on one graph")
    graph_arg(c)
    c.add_argument("--k", type=int)
    c.add_argument("--k-min", type=int)
    c.add_argument("--k-max", type=int)
    fmt_arg(c)
    c.set_defaults(func=cmd_compare)

    m = sub.add_parser("mine", help="sweep a graph population for disagreements")
    m.add_argument("--exhaustive", type=int, metavar="N", help="all labeled digraphs with 1..N vertices")
    m.add_argument("--no-loops", action="store_true", help="exhaustive mode without self-loops")
    m.add_argument("--n", type=int, help="vertex count for random graphs")
    m.add_argument("--p", type=float, nargs="+", default=[0.2, 0.4, 0.6])
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--count", type=int, default=1000, help="random graphs per p")
    m.add_argument("--loops", action="store_true", help="random mode with self-loops")
    m.add_argument("--k-min", type=int)
    m.add_argument("--k-max", type=int)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--findings", help="write records here as JSON lines")
    m.set_defaults(func=cmd_mine)

    b = sub.add_parser("bench", help="time right powers on complete digraphs")
    b.add_argument("--n", type=int, nargs="+", default=[16, 32, 64])
    b.add_argument("--reps", type=int, default=5)
    fmt_arg(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except GraphParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ArgumentError as exc:
        print(f"argument error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
