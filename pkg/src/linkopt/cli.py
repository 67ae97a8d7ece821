"""Command-line front end.

Every subcommand prints one JSON report to stdout and a short human
summary to stderr. Exit codes: 0 success, 1 bad input, 2 infeasible
request (assumption violated, precondition failed, search cap exceeded).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .brute import brute_force_optimum, brute_force_target
from .calculus import OutlinkMutation, RankOneUpdater
from .engine import (
    RankingContext,
    parse_personalization,
    pagerank,
    set_pagerank,
    v_top_set,
    visit_vector,
)
from .errors import AssumptionViolated, ConvergenceError, InfeasibleError, InputError, LinkOptError
from .graph import WebGraph, nodes_without_exit, nodeset, parse_graph, parse_nodeset, validate
from .sim import SimConfig, simulate_return_time, simulate_visits
from .structures import (
    StructureConstraints,
    build_optimal_structure,
    verify_internal_structure,
    verify_outlink_structure,
    verify_website_opt_shape,
)

SCHEMA_VERSION = "1.0"

_COMMAND_RESULTS = {
    "pagerank": ["pi"],
    "visits": ["v", "set_pagerank", "V"],
    "update": ["old_value", "new_value", "delta", "sign", "residual"],
    "optimal": ["graph", "value", "certificate"],
    "verify": ["outlink", "internal", "website"],
    "brute": ["optima", "value", "count_enumerated", "top2_gap"],
    "simulate": ["estimate", "stderr", "truncated_mass"],
    "export-dot": ["dot"],
}

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command", "argv", "inputs_digest", "results", "timing"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": sorted(_COMMAND_RESULTS)},
        "argv": {"type": "array", "items": {"type": "string"}},
        "inputs_digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "results": {"type": "object"},
        "timing": {
            "type": "object",
            "required": ["seconds"],
            "properties": {"seconds": {"type": "number", "minimum": 0}},
        },
        "version": {"type": "string"},
    },
    "allOf": [
        {
            "if": {"properties": {"command": {"const": cmd}}},
            "then": {"properties": {"results": {"required": keys}}},
        }
        for cmd, keys in _COMMAND_RESULTS.items()
    ],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _round(obj):
    """Floats to 12 significant digits, recursively."""
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if not math.isfinite(x) else float(f"{x:.12g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_round(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(x) for x in obj]
    return obj


def export_dot(g: WebGraph, I=(), v: np.ndarray | None = None) -> str:
    """Graphviz text; ``I`` is drawn as a cluster, ordered by decreasing ``v`` if given."""
    I = sorted(nodeset(g, I))
    lines = ["digraph G {", "  rankdir=LR;", "  node [shape=circle];"]

    def label(i):
        return f'  {i} [label="{i}\\n{v[i - 1]:.3f}"];' if v is not None else f"  {i};"

    if I:
        order = sorted(I, key=lambda i: (-v[i - 1], i)) if v is not None else I
        lines += ["  subgraph cluster_I {", '    label="I";', "    style=rounded;"]
        lines += ["  " + label(i) for i in order]
        lines += [f"    {a} -> {b} [style=invis, weight=100];" for a, b in zip(order, order[1:])]
        lines.append("  }")
    lines += [label(i) for i in g.nodes if i not in I]
    lines += [f"  {a} -> {b};" for a, b in g.edge_list()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _digest(blobs: list[bytes], params: dict[str, Any]) -> str:
    h = hashlib.sha256()
    for blob in blobs:
        h.update(len(blob).to_bytes(8, "big"))
        h.update(blob)
    h.update(json.dumps(params, sort_keys=True, separators=(",", ":")).encode())
    return h.hexdigest()


def _load(args) -> tuple[WebGraph, RankingContext, list[bytes]]:
    raw = _read(args.graph)
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError(f"{args.graph} is not UTF-8") from None
    g = validate(parse_graph(text), patch_dangling=args.patch_dangling)
    blobs = [raw]
    if args.z_file:
        zraw = _read(args.z_file)
        z = parse_personalization(zraw.decode("utf-8"))
        blobs.append(zraw)
        ctx = RankingContext(args.c, z)
        if ctx.n != g.n:
            raise InputError(f"personalization vector has length {ctx.n}, graph has {g.n} nodes")
    else:
        ctx = RankingContext.uniform(g.n, args.c)
    return g, ctx, blobs


def _set(g: WebGraph, text: str | None, required: bool = True) -> frozenset[int]:
    if text is None:
        if required:
            raise InputError("--set is required")
        return frozenset()
    return nodeset(g, parse_nodeset(text))


def _constraints(args) -> StructureConstraints:
    return StructureConstraints(allow_self_links=not args.no_self_links, min_external_outlinks=args.min_outlinks)


def _summary(results: dict[str, Any]) -> str:
    parts = []
    for key, val in results.items():
        if isinstance(val, float):
            parts.append(f"{key}={val:.4g}")
        elif isinstance(val, (str, int, bool)) and len(str(val)) < 40:
            parts.append(f"{key}={val}")
    return " ".join(parts)


def cmd_pagerank(args, g, ctx):
    pi = pagerank(g, ctx)
    out: dict[str, Any] = {"pi": pi}
    if args.set is not None:
        out.update(cmd_visits(args, g, ctx))
    return out


def cmd_visits(args, g, ctx):
    I = _set(g, args.set)
    v = visit_vector(g, I, ctx)
    out = {"v": v, "set_pagerank": set_pagerank(g, I, ctx), "V": [], "V_all_zero": False}
    if len(I) < g.n:
        top = v_top_set(g, I, ctx, v)
        out["V"], out["V_all_zero"] = sorted(top.nodes), top.all_zero
    return out


def cmd_update(args, g, ctx):
    I = _set(g, args.set)
    m = OutlinkMutation(args.node, parse_nodeset(args.children))
    upd = RankOneUpdater(g, I, ctx)
    new = upd.updated_value(m)
    recomputed = set_pagerank(m.apply(g), I, ctx)
    sign = upd.sign(m)
    margin = upd.margin(m)
    return {
        "old_value": upd.value,
        "new_value": new,
        "delta": new - upd.value,
        "sign": sign.value,
        "margin": margin,
        "at_tolerance": sign.value == "unchanged" and margin != 0.0,
        "denominator": upd.denominator(m),
        "recomputed": recomputed,
        "residual": abs(new - recomputed),
    }


def cmd_optimal(args, g, ctx):
    I = _set(g, args.set)
    cons = _constraints(args)
    best, value = build_optimal_structure(g, I, ctx, cons, max_perm=args.max_perm)
    cert = verify_website_opt_shape(best, I, ctx, cons)
    return {"graph": best.to_text(), "edges": best.edge_list(), "value": value, "certificate": cert.to_dict()}


def cmd_verify(args, g, ctx):
    I = _set(g, args.set)
    stuck = nodes_without_exit(g, I)
    if stuck:
        raise AssumptionViolated(stuck)
    out = {}
    for name, fn in (("outlink", verify_outlink_structure), ("internal", verify_internal_structure),
                     ("website", verify_website_opt_shape)):
        try:
            out[name] = fn(g, I, ctx).to_dict()
        except InfeasibleError as exc:
            out[name] = {"applicable": False, "reason": str(exc)}
    return out


def cmd_brute(args, g, ctx):
    I = _set(g, args.set)
    cons = _constraints(args)
    if args.target is not None:
        res = brute_force_target(g, I, parse_nodeset(args.target), ctx, cons, cap_bits=args.cap)
    else:
        res = brute_force_optimum(g, I, ctx, cons, cap_bits=args.cap)
    return res.to_dict()


def cmd_simulate(args, g, ctx):
    cfg = SimConfig(args.trials, args.seed, args.max_steps, args.workers)
    if args.kind == "visits":
        I = _set(g, args.set)
        res = simulate_visits(g, I, ctx, args.start, cfg)
        exact = visit_vector(g, I, ctx)[args.start - 1]
    else:
        res = simulate_return_time(g, ctx, args.start, cfg)
        exact = 1.0 / pagerank(g, ctx)[args.start - 1]
    return {"kind": args.kind, "estimate": res.estimate, "stderr": res.stderr,
            "truncated_mass": res.truncated_mass, "exact": exact,
            "z_score": (res.estimate - exact) / res.stderr if res.stderr > 0 else 0.0}


def cmd_export_dot(args, g, ctx):
    I = _set(g, args.set, required=False)
    v = visit_vector(g, I, ctx) if (I and args.with_v) else None
    dot = export_dot(g, I, v)
    if args.out:
        Path(args.out).write_text(dot)
    return {"dot": dot}


COMMANDS = {
    "pagerank": cmd_pagerank,
    "visits": cmd_visits,
    "update": cmd_update,
    "optimal": cmd_optimal,
    "verify": cmd_verify,
    "brute": cmd_brute,
    "simulate": cmd_simulate,
    "export-dot": cmd_export_dot,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--graph", required=True, help="edge-list file")
    common.add_argument("--c", type=float, default=0.85, help="damping factor (default 0.85)")
    common.add_argument("--z-file", help="personalization vector, one value per line (default uniform)")
    common.add_argument("--patch-dangling", action="store_true",
                        help="give dangling nodes links to every node instead of rejecting them")

    ap = _Parser(prog="linkopt", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pagerank", parents=[common], help="PageRank vector")
    p.add_argument("--set", help="also report v and the PageRank of this set")
    p = sub.add_parser("visits", parents=[common], help="visit vector of a node set")
    p.add_argument("--set", required=True)
    p = sub.add_parser("update", parents=[common], help="replace the outlinks of one node")
    p.add_argument("--set", required=True)
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--children", required=True, help="new child set, e.g. 2,3")

    shape = _Parser(add_help=False)
    shape.add_argument("--set", required=True)
    shape.add_argument("--no-self-links", action="store_true")
    shape.add_argument("--min-outlinks", type=int, default=1)
    p = sub.add_parser("optimal", parents=[common, shape], help="best chain-shaped link structure")
    p.add_argument("--max-perm", type=int, default=8)
    p = sub.add_parser("verify", parents=[common], help="check the optimal-structure conditions")
    p.add_argument("--set", required=True)
    p = sub.add_parser("brute", parents=[common, shape], help="exhaustive optimum")
    p.add_argument("--target", help="maximize the PageRank of this subset of --set instead")
    p.add_argument("--cap", type=int, default=25, help="maximum number of free link bits")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo random surfer")
    p.add_argument("kind", choices=["visits", "return"])
    p.add_argument("--set", help="node set (visits only)")
    p.add_argument("--start", type=int, required=True, help="start node (return: the node itself)")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int)
    p.add_argument("--workers", type=int, help="threads (default from LINKOPT_THREADS, else 1)")

    p = sub.add_parser("export-dot", parents=[common], help="Graphviz rendering")
    p.add_argument("--set")
    p.add_argument("--with-v", action="store_true", help="label nodes with v")
    p.add_argument("--out", help="also write the DOT text to this file")
    return ap


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        t0 = time.perf_counter()
        g, ctx, blobs = _load(args)
        params = {k: v for k, v in sorted(vars(args).items()) if k not in ("graph", "z_file", "out", "workers")}
        results = COMMANDS[args.command](args, g, ctx)
        elapsed = time.perf_counter() - t0
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except (InfeasibleError, ConvergenceError) as exc:
        print(f"infeasible: {exc}", file=stderr)
        return 2
    except LinkOptError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    report = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": args.command,
        "argv": argv,
        "inputs_digest": _digest(blobs, params),
        "results": _round(results),
        "timing": {"seconds": round(elapsed, 6)},
    }
    json.dump(report, stdout, indent=2)
    stdout.write("\n")
    print(f"{args.command}: {_summary(results)}", file=stderr)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
