"""Command line front end: ``twoecss <command> ...``.

Exit status is 0 on success, 1 when a verification fails (or the solver
cannot certify its answer) and 2 on bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

from .cover import canonicalize, check_canonical, cover_stats, min_two_edge_cover
from .errors import BadSpec, LimitExceeded, TwoEcssError
from .graph_core import decompose
from .instances import generate, parse_solution, parse_spec, read_graph, serialize, to_dot, write_graph
from .oracle import OracleLimits, exact_2ecss_certified, verify_2ec_spanning
from .pipeline import ratio_envelope_check, solve, solve_structured
from .reduction import ReductionParams, red_solve, structural_checks

OK, FAILED, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("epsilon must lie strictly between 0 and 1")
    return value


def _load(path: str):
    try:
        return read_graph(path)
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from exc


def _edge_lines(g, eids) -> list[list[int]]:
    return [list(g.ends(e)) for e in sorted(eids)]


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_solve(a) -> int:
    g = _load(a.file)
    params = ReductionParams(epsilon=a.epsilon, contractible_bound=a.contractible_bound)
    report = solve(g, params, instance_id=os.path.basename(a.file), oracle=a.oracle)
    d = report.as_dict()
    d["solution"] = _edge_lines(g, report.solution)
    text = json.dumps(_jsonable(d), indent=2, sort_keys=True) + "\n"
    if a.json:
        _write(a.json, text)
        print(f"solution_size {report.solution_size}  lower_bound {report.lower_bound}"
              f"  regime {report.regime_chosen}"
              + (f"  opt {report.opt}" if report.opt is not None else ""))
    else:
        sys.stdout.write(text)
    if a.output:
        write_graph(a.output, g, report.solution)
    if a.dot:
        _write(a.dot, to_dot(g, report.solution))
    return OK


def cmd_verify(a) -> int:
    g = _load(a.graph)
    try:
        with open(a.solution, encoding="utf-8") as fh:
            sol = parse_solution(g, fh.read())
    except OSError as exc:
        raise _Usage(f"cannot read {a.solution}: {exc.strerror}") from exc
    verdict = verify_2ec_spanning(g, sol)
    if verdict:
        print(f"ok: {len(sol)} edges form a 2-edge-connected spanning subgraph")
        return OK
    kind, w = verdict.witness_kind, verdict.witness
    if kind in ("bridge", "dead_edge"):
        u, v = g.ends(w)
        where = f"edge {u} {v}"
    else:
        where = f"vertex {w}"
    print(f"FAIL: {kind} at {where}", file=sys.stderr)
    return FAILED


def cmd_cover(a) -> int:
    g = _load(a.file)
    h = min_two_edge_cover(g)
    if a.canonical:
        h = canonicalize(g, h)
        rep = check_canonical(g, h)
        if not rep.canonical:
            print(f"FAIL: cover not canonical: {rep}", file=sys.stderr)
            return FAILED
    stats = cover_stats(decompose(g, h))
    print(f"# 2-edge-cover: {len(h)} edges, t={stats.t} b={stats.b}")
    sys.stdout.write(serialize(g, h))
    if a.dot:
        _write(a.dot, to_dot(g, h))
    return OK


def cmd_reduce(a) -> int:
    g = _load(a.file)
    params = ReductionParams(epsilon=a.epsilon, contractible_bound=a.contractible_bound)
    result, trace = red_solve(g, params, solve_structured)

    def node(t):
        return {"kind": t.kind, "n": t.n, "m": t.m, "info": _jsonable(t.info),
                "result_size": len(t.result),
                "children": [node(c) for c, _ in t.children]}

    certs = []
    for h in trace.structured_inputs():
        rep = structural_checks(h, params)
        certs.append({"n": h.n, "m": h.m, "simple": rep.simple,
                      "two_vertex_connected": rep.two_vertex_connected,
                      "no_irrelevant_edge": rep.no_irrelevant_edge,
                      "no_non_isolating_cut": rep.no_non_isolating_cut,
                      "no_contractible": rep.no_contractible, "ok": rep.ok})
    out = {"solution_size": len(result), "trace": node(trace.root), "structured_inputs": certs}
    sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return OK if all(c["ok"] for c in certs) else FAILED


def cmd_oracle(a) -> int:
    g = _load(a.file)
    lim = OracleLimits(max_nodes=a.max_nodes, max_edges=a.max_edges)
    res = exact_2ecss_certified(g, lim)
    print(f"# optimum {len(res.edges)} edges; sizes refuted: {list(res.refuted)}")
    sys.stdout.write(serialize(g, res.edges))
    return OK


def cmd_gen(a) -> int:
    g = generate(parse_spec(a.spec))
    text = f"# {a.spec}\n" + serialize(g)
    _write(a.output, text)
    if a.dot:
        _write(a.dot, to_dot(g))
    return OK


def bench_row(path: str) -> tuple[str, Optional[Fraction]]:
    """Table line for the instance in ``path`` (no timing, so reproducible) and its ratio."""
    name = os.path.basename(path)
    try:
        g = read_graph(path)
        r = solve(g, instance_id=name, oracle=True)
    except (TwoEcssError, OSError) as exc:
        return f"{name:<28} error {type(exc).__name__}", None
    opt = "-" if r.opt is None else str(r.opt)
    ratio = "-" if r.ratio_vs_opt is None else f"{float(r.ratio_vs_opt):.4f}"
    return (f"{name:<28} {r.n:>4} {r.m:>5} {r.solution_size:>5} {opt:>5} {r.lower_bound:>5} "
            f"{ratio:>7} {float(r.ratio_vs_lower_bound):>7.4f} {r.regime_chosen:<17} "
            f"{'yes' if r.fallback_used else 'no'}"), r.ratio_vs_opt


def bench_table(paths: Sequence[str], jobs: int = 1) -> str:
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(bench_row, paths))
    else:
        rows = [bench_row(p) for p in paths]
    head = (f"{'instance':<28} {'n':>4} {'m':>5} {'size':>5} {'opt':>5} {'lower':>5} "
            f"{'/opt':>7} {'/lower':>7} {'regime':<17} fallback")
    ratios = [x for _, x in rows if x is not None]
    lines = [head, *(line for line, _ in rows)]
    if ratios:
        lines.append(f"# {len(ratios)} instances with known optimum; "
                     f"mean ratio {float(sum(ratios) / len(ratios)):.4f}, max {float(max(ratios)):.4f}")
    return "\n".join(lines) + "\n"


def cmd_bench(a) -> int:
    if not os.path.isdir(a.dir):
        raise _Usage(f"{a.dir} is not a directory")
    paths = sorted(os.path.join(a.dir, f) for f in os.listdir(a.dir)
                   if f.endswith((".txt", ".edges")) and os.path.isfile(os.path.join(a.dir, f)))
    sys.stdout.write(bench_table(paths, a.jobs))
    return OK


def cmd_check_ratio(a) -> int:
    res = ratio_envelope_check()
    print(f"grid maximum {res.grid_max} over {res.grid_points} candidate points")
    print(f"worst-case factor {res.worst}")
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twoecss", description="2-edge-connected spanning subgraph tools")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="approximate a minimum 2EC spanning subgraph")
    s.add_argument("file")
    s.add_argument("--json", metavar="OUT", help="write the report here instead of stdout")
    s.add_argument("--oracle", action="store_true", help="also compute the exact optimum")
    s.add_argument("--epsilon", type=_fraction, default=Fraction(1, 6))
    s.add_argument("--contractible-bound", type=int, default=6)
    s.add_argument("-o", "--output", help="write the solution as an edge list")
    s.add_argument("--dot", metavar="OUT")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", help="check a solution file")
    s.add_argument("graph")
    s.add_argument("solution")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cover", help="minimum 2-edge-cover")
    s.add_argument("file")
    s.add_argument("--canonical", action="store_true")
    s.add_argument("--dot", metavar="OUT")
    s.set_defaults(func=cmd_cover)

    s = sub.add_parser("reduce", help="reduction trace and structural certificates")
    s.add_argument("file")
    s.add_argument("--epsilon", type=_fraction, default=Fraction(1, 6))
    s.add_argument("--contractible-bound", type=int, default=6)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("oracle", help="exact optimum for small graphs")
    s.add_argument("file")
    s.add_argument("--max-nodes", type=int, default=12)
    s.add_argument("--max-edges", type=int, default=24)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("gen", help="generate an instance, e.g. random_2ec:10,4,seed=3")
    s.add_argument("spec")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--dot", metavar="OUT")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="table of size/opt/ratio for every instance in a directory")
    s.add_argument("dir")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("check-ratio", help="exact check of the worst-case factor")
    s.set_defaults(func=cmd_check_ratio)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return a.func(a)
    except (_Usage, BadSpec, LimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except TwoEcssError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
