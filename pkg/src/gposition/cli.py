"""Command line entry point: ``gposition {gp,verify,construct,product,sweep,membership}``.

Reports go to stdout (text or JSON), diagnostics to stderr.  Exit codes:

    0  success
    2  parse error in an input file (or bad command line)
    3  input graph is disconnected
    4  solver budget exhausted (the best set found is still reported)
    5  vertex set out of range or forced set not in general position
    6  product factor is not a tree or has order < 3
    7  anchor override is a leaf
    8  verification sweep found a mismatch
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time

from . import __version__
from .enumeration import sweep_verify_membership, sweep_verify_theorem
from .errors import (
    Disconnected,
    FactorTooSmall,
    InfeasibleForcedSet,
    NotANonLeaf,
    NotATree,
    ParseError,
    VertexOutOfRange,
)
from .graph import Graph, all_pairs_distances, format_edge_list, is_connected, parse_edge_list
from .product import cartesian_product, construct_maximal_gp, parse_product_spec, theorem_prediction
from .solver import (
    DEFAULT_BUDGET,
    first_violating_triple,
    gp_number_exact,
    is_maximal_gp,
    make_instance,
)
from .trees import is_tree, tree_profile

log = logging.getLogger("gposition")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DISCONNECTED = 3
EXIT_BUDGET = 4
EXIT_BAD_SET = 5
EXIT_NOT_TREE = 6
EXIT_LEAF_ANCHOR = 7
EXIT_MISMATCH = 8

DEFAULT_SWEEP_MAX = 6
HARD_SWEEP_MAX = 7


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from exc


def _load_graph(path: str) -> Graph:
    try:
        return parse_edge_list(_read_text(path))
    except ParseError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from exc


def _load_product(path: str) -> tuple[Graph, Graph]:
    try:
        return parse_product_spec(_read_text(path))
    except ParseError as exc:
        raise CliError(EXIT_PARSE, f"{path}: {exc}") from exc


def _vertex_list(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise CliError(EXIT_PARSE, f"vertex list must be comma-separated integers: {text!r}") from None


def _check_range(g: Graph, verts: list[int], what: str) -> None:
    bad = [v for v in verts if not 0 <= v < g.n]
    if bad:
        raise CliError(EXIT_BAD_SET, f"{what} vertices {bad} outside [0,{g.n})")


def _require_connected(g: Graph, path: str) -> None:
    if not is_connected(g):
        raise CliError(EXIT_DISCONNECTED, f"{path}: graph is disconnected")


def _ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000, 3)


# --- commands ------------------------------------------------------------------


def cmd_gp(args) -> tuple[dict, int]:
    start = time.perf_counter()
    g = _load_graph(args.input)
    forced = _vertex_list(args.forced)
    _check_range(g, forced, "forced")
    _require_connected(g, args.input)
    try:
        res = gp_number_exact(make_instance(g, forced=forced, budget=args.budget))
    except InfeasibleForcedSet as exc:
        raise CliError(EXIT_BAD_SET, str(exc)) from exc
    report = {
        "command": "gp",
        "input": args.input,
        "gp_number": res.gp_number,
        "witness": sorted(res.witness),
        "proven_optimal": res.proven_optimal,
        "nodes_expanded": res.nodes_expanded,
        "elapsed_ms": _ms(start),
    }
    if forced:
        report["forced"] = sorted(set(forced))
    return report, EXIT_OK if res.proven_optimal else EXIT_BUDGET


def cmd_verify(args) -> tuple[dict, int]:
    start = time.perf_counter()
    g = _load_graph(args.input)
    if args.set is None:
        raise CliError(EXIT_PARSE, "verify needs --set")
    verts = sorted(set(_vertex_list(args.set)))
    _check_range(g, verts, "set")
    _require_connected(g, args.input)
    dm = all_pairs_distances(g)
    report = {"command": "verify", "input": args.input, "set": verts, "verdict": None,
              "violating_triple": None, "gp_number": None, "proven_optimal": None}
    code = EXIT_OK
    bad = first_violating_triple(dm, verts)
    if bad is not None:
        report["verdict"] = "not-gp"
        report["violating_triple"] = list(bad)
    elif not is_maximal_gp(dm, verts):
        report["verdict"] = "gp-but-not-maximal"
    else:
        res = gp_number_exact(make_instance(g, budget=args.budget, seed=verts, dm=dm))
        report["gp_number"] = res.gp_number
        report["proven_optimal"] = res.proven_optimal
        report["verdict"] = "maximum-gp" if res.gp_number == len(verts) and res.proven_optimal else "maximal-gp"
        if not res.proven_optimal:
            code = EXIT_BUDGET
    report["elapsed_ms"] = _ms(start)
    return report, code


def cmd_construct(args) -> tuple[dict, int]:
    start = time.perf_counter()
    g, h = _load_product(args.input)
    for graph, name in ((g, "G"), (h, "H")):
        if not is_tree(graph):
            raise CliError(EXIT_NOT_TREE, f"factor {name} is not a tree")
        if graph.n < 3:
            raise CliError(EXIT_NOT_TREE, f"factor {name} has order {graph.n} < 3")
    tg, th = tree_profile(g), tree_profile(h)
    vi, vj = args.vi, args.vj
    if args.seed is not None:
        rng = random.Random(args.seed)
        vi = rng.choice(tg.nonleaves) if vi is None else vi
        vj = rng.choice(th.nonleaves) if vj is None else vj
    vi = tg.nonleaves[0] if vi is None else vi
    vj = th.nonleaves[0] if vj is None else vj
    try:
        s = construct_maximal_gp(tg, th, vi, vj)
    except VertexOutOfRange as exc:
        raise CliError(EXIT_BAD_SET, str(exc)) from exc
    except NotANonLeaf as exc:
        raise CliError(EXIT_LEAF_ANCHOR, str(exc)) from exc
    except (NotATree, FactorTooSmall) as exc:
        raise CliError(EXIT_NOT_TREE, str(exc)) from exc
    p = cartesian_product(g, h)
    indices = sorted(s)
    if first_violating_triple(p.dm, indices) is not None:
        verdict = "not-gp"
    else:
        verdict = "maximal-gp" if is_maximal_gp(p.dm, indices) else "gp-but-not-maximal"
    report = {
        "command": "construct",
        "input": args.input,
        "vi": vi,
        "vj": vj,
        "coordinates": ["%d,%d" % p.unflatten(v) for v in indices],
        "indices": indices,
        "size": len(indices),
        "predicted": theorem_prediction(tg, th),
        "verdict": verdict,
        "elapsed_ms": _ms(start),
    }
    return report, EXIT_OK


def cmd_product(args) -> tuple[dict, int]:
    start = time.perf_counter()
    g, h = _load_product(args.input)
    p = cartesian_product(g, h)
    report = {
        "command": "product",
        "input": args.input,
        "n": p.materialized.n,
        "m": p.materialized.m,
        "factor_orders": [g.n, h.n],
        "index_map": "a*n(H)+b",
        "edges": [list(e) for e in p.materialized.edges],
        "edge_list": format_edge_list(p.materialized),
        "elapsed_ms": _ms(start),
    }
    return report, EXIT_OK


def cmd_sweep(args) -> tuple[dict, int]:
    lo, hi = args.min, args.max
    cap = HARD_SWEEP_MAX if args.allow_order_7 else DEFAULT_SWEEP_MAX
    if not 3 <= lo <= hi <= cap:
        hint = "" if args.allow_order_7 else " (pass --allow-order-7 to go up to 7)"
        raise CliError(EXIT_PARSE, f"sweep range must satisfy 3 <= min <= max <= {cap}{hint}")
    report = sweep_verify_theorem(lo, hi, jobs=args.jobs, budget=args.budget)
    out = report.to_dict(timing=True)
    return out, EXIT_OK if not report.mismatches else EXIT_MISMATCH


def cmd_membership(args) -> tuple[dict, int]:
    if not 3 <= args.max <= 8:
        raise CliError(EXIT_PARSE, "membership needs 3 <= --max <= 8")
    report = sweep_verify_membership(args.max, budget=args.budget)
    return report.to_dict(timing=True), EXIT_OK if not report.mismatches else EXIT_MISMATCH


# --- rendering -------------------------------------------------------------------


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "elapsed_ms"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _render_text(report: dict) -> str:
    cmd = report["command"]
    lines = []
    if cmd == "gp":
        lines.append(f"gp_number: {report['gp_number']}")
        lines.append(f"witness: {','.join(map(str, report['witness']))}")
        lines.append(f"proven_optimal: {str(report['proven_optimal']).lower()}")
        lines.append(f"nodes_expanded: {report['nodes_expanded']}")
    elif cmd == "verify":
        lines.append(f"verdict: {report['verdict']}")
        if report["violating_triple"]:
            lines.append(f"violating_triple: {','.join(map(str, report['violating_triple']))}")
        if report["gp_number"] is not None:
            lines.append(f"gp_number: {report['gp_number']}")
    elif cmd == "construct":
        lines.append(f"anchors: vi={report['vi']} vj={report['vj']}")
        lines.append(f"size: {report['size']} (predicted gp {report['predicted']})")
        for coord, idx in zip(report["coordinates"], report["indices"]):
            lines.append(f"  ({coord}) -> {idx}")
        lines.append(f"verdict: {report['verdict']}")
    elif cmd == "product":
        return report["edge_list"].rstrip("\n")
    elif cmd == "sweep":
        for rec in report["pairs"]:
            status = "ok" if rec["predicted"] == rec["computed"] and rec["proven_optimal"] else "MISMATCH"
            lines.append(
                f"{rec['key_g']} x {rec['key_h']}: predicted {rec['predicted']} "
                f"computed {rec['computed']} nodes {rec['nodes']} {status}"
            )
        lines.append(f"pairs_checked: {report['pairs_checked']}")
        lines.append(f"mismatches: {len(report['mismatches'])}")
    elif cmd == "membership":
        lines.append(f"trees_checked: {report['trees_checked']}")
        lines.append(f"vertices_checked: {report['vertices_checked']}")
        lines.append(f"mismatches: {len(report['mismatches'])}")
    if "elapsed_ms" in report:
        lines.append(f"elapsed_ms: {report['elapsed_ms']}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gposition", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--json", dest="format", action="store_const", const="json",
                        help="shorthand for --format json")
    common.add_argument("--no-timing", action="store_true", help="omit elapsed_ms fields")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="node-expansion cap")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gp", parents=[common], help="exact general position number")
    p.add_argument("input", help="edge-list file ('-' for stdin)")
    p.add_argument("--forced", help="comma-separated vertices that must be in the set")
    p.set_defaults(func=cmd_gp)

    p = sub.add_parser("verify", parents=[common], help="classify a vertex set")
    p.add_argument("input")
    p.add_argument("--set", required=True, help="comma-separated vertices")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", parents=[common], help="maximal gp-set of a tree product")
    p.add_argument("input", help="product spec: two edge lists separated by a '%%' line")
    p.add_argument("--vi", type=int, help="non-leaf anchor in G")
    p.add_argument("--vj", type=int, help="non-leaf anchor in H")
    p.add_argument("--seed", type=int, help="pick random non-leaf anchors with this seed")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("product", parents=[common], help="materialize G□H as an edge list")
    p.add_argument("input")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("sweep", parents=[common], help="check gp(T□T*) = l(T)+l(T*) over tree pairs")
    p.add_argument("--min", type=int, default=3)
    p.add_argument("--max", type=int, default=DEFAULT_SWEEP_MAX)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all CPUs)")
    p.add_argument("--allow-order-7", action="store_true", help="acknowledge the slower order-7 sweep")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("membership", parents=[common], help="check the non-leaf membership rule")
    p.add_argument("--max", type=int, default=8)
    p.set_defaults(func=cmd_membership)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        report, code = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except Disconnected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    if args.no_timing:
        report = _strip_timing(report)
    if args.format == "json":
        if report["command"] == "product":
            report = {k: v for k, v in report.items() if k != "edge_list"}
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(_render_text(report) + "\n")
    if code == EXIT_BUDGET:
        print("warning: node budget exhausted; result is not proven optimal", file=sys.stderr)
    elif code == EXIT_MISMATCH:
        print("error: verification mismatch found", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
