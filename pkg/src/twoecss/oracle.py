"""Brute-force ground truth and the verifier every other module asserts against.

The searches here are deliberately independent of the polynomial-time
routines they check: no matchings, no matroids, only enumeration.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import kernels
from .errors import LimitExceeded, NotTwoEC, OddVertexCount
from .graph_core import Graph, components, degrees, is_two_edge_connected


@dataclass(frozen=True)
class OracleLimits:
    max_nodes: int = 12
    max_edges: int = 24
    time_budget: Optional[int] = None  # milliseconds
    node_budget: int = 50_000_000  # search nodes per size probe


DEFAULT_LIMITS = OracleLimits()


def _check(n: int, m: int, lim: OracleLimits) -> None:
    if n > lim.max_nodes or m > lim.max_edges:
        raise LimitExceeded(f"instance with n={n}, m={m} exceeds limits "
                            f"n<={lim.max_nodes}, m<={lim.max_edges}")


@dataclass(frozen=True)
class ExactResult:
    edges: frozenset[int]
    refuted: tuple[int, ...]  # sizes proven infeasible, all below len(edges)

    @property
    def complete(self) -> bool:
        lo = self.refuted[0] if self.refuted else len(self.edges)
        return list(self.refuted) == list(range(lo, len(self.edges)))


def exact_2ecss_certified(g: Graph, lim: OracleLimits = DEFAULT_LIMITS) -> ExactResult:
    """Minimum 2EC spanning subgraph plus the sizes refuted on the way.

    Sizes are probed upward from the degree bound; each probe either finds
    the lexicographically smallest solution of that size or exhausts the
    search space.  Self-loops are ignored; parallel edges are allowed.
    """
    eids = [e for e in g.edge_ids() if g.ends(e)[0] != g.ends(e)[1]]
    _check(g.n, len(eids), lim)
    if not is_two_edge_connected(g, eids):
        raise NotTwoEC("exact search needs a 2-edge-connected input")
    if g.n <= 1:
        return ExactResult(frozenset(), ())
    eu = [g.ends(e)[0] for e in eids]
    ev = [g.ends(e)[1] for e in eids]
    start = time.monotonic()
    refuted = []
    size = g.n
    while size <= len(eids):
        status, chosen = kernels.min_2ecss(g.n, eu, ev, size, lim.node_budget)
        if status == kernels.FOUND:
            return ExactResult(frozenset(eids[i] for i in chosen), tuple(refuted))
        if status == kernels.BUDGET:
            raise LimitExceeded(f"search budget exhausted at size {size}")
        refuted.append(size)
        if lim.time_budget is not None and (time.monotonic() - start) * 1000 > lim.time_budget:
            raise LimitExceeded(f"time budget of {lim.time_budget} ms exhausted")
        size += 1
    raise AssertionError("a 2EC graph always contains a 2EC spanning subgraph")


def exact_2ecss(g: Graph, lim: OracleLimits = DEFAULT_LIMITS) -> frozenset[int]:
    """Minimum-size 2EC spanning subgraph by exhaustive branch and bound."""
    res = exact_2ecss_certified(g, lim)
    if not res.complete:
        raise AssertionError("exact search skipped a size")
    return res.edges


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness_kind: Optional[str] = None  # "dead_edge" | "isolated" | "unreachable" | "bridge"
    witness: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "2-edge-connected spanning subgraph"
        return f"{self.witness_kind} {self.witness}"


def verify_2ec_spanning(g: Graph, s: Iterable[int]) -> Verdict:
    """Check that ``s`` is a 2EC spanning subgraph of ``g``."""
    s = sorted(set(s))
    for e in s:
        if not g.is_live(e):
            return Verdict(False, "dead_edge", e)
    if g.n <= 1:
        return Verdict(True)
    deg = degrees(g, s)
    for v in range(g.n):
        if deg[v] == 0:
            return Verdict(False, "isolated", v)
    comps = components(g, s)
    if len(comps) > 1:
        return Verdict(False, "unreachable", comps[1][0])
    eu = [g.ends(e)[0] for e in s]
    ev = [g.ends(e)[1] for e in s]
    br = kernels.bridges(g.n, eu, ev, [1] * len(s))
    if br:
        return Verdict(False, "bridge", s[min(br)])
    return Verdict(True)


# ---------------------------------------------------------------------------
# alpha of a core-triangle cover


def attachment_pairs(g: Graph, core_nodes: Iterable[int], triangle: Iterable[int]
                     ) -> list[tuple[int, int]]:
    """Distinct core pairs ``(a, b)``, ``a < b``, reachable by a 2-matching from the triangle."""
    core = set(core_nodes)
    tri = sorted(triangle)
    reach = {x: sorted({y for y in g.neighbors(x) if y in core}) for x in tri}
    pairs = set()
    for x, y in itertools.combinations(tri, 2):
        for a in reach[x]:
            for b in reach[y]:
                if a != b:
                    pairs.add((min(a, b), max(a, b)))
    return sorted(pairs)


def exact_alpha(ct, g: Graph, lim: OracleLimits = DEFAULT_LIMITS) -> int:
    """Minimum number of components over all valid triangle attachments.

    ``ct`` needs ``core_nodes`` and ``triangles`` (node sets).  Every choice
    of two triangle-to-core edges at distinct triangle nodes is enumerated.
    """
    core = sorted(ct.core_nodes)
    tris = [sorted(t) for t in ct.triangles]
    if len(tris) > 4:
        raise LimitExceeded(f"exact alpha enumerates at most 4 triangles, got {len(tris)}")
    options = []
    for t in tris:
        pairs = attachment_pairs(g, core, t)
        # a triangle whose two edges land on one core node adds no connection
        options.append(pairs + [None])
    index = {v: i for i, v in enumerate(core)}
    best = len(core)
    for choice in itertools.product(*options):
        parent = list(range(len(core)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        merged = 0
        for pair in choice:
            if pair is None:
                continue
            a, b = find(index[pair[0]]), find(index[pair[1]])
            if a != b:
                parent[a] = b
                merged += 1
        best = min(best, len(core) - merged)
    return best


def alpha_feasible(ct, g: Graph) -> bool:
    """Whether every triangle has at least one valid attachment (possibly a loop)."""
    core = set(ct.core_nodes)
    for t in ct.triangles:
        hit = [x for x in t if any(y in core for y in g.neighbors(x))]
        if len(hit) < 2:
            return False
    return True


# ---------------------------------------------------------------------------
# exhaustive minima for the polynomial-time routines


def _subsets_by_size(items: Sequence[int], lo: int = 0, hi: Optional[int] = None):
    hi = len(items) if hi is None else hi
    for k in range(lo, hi + 1):
        for combo in itertools.combinations(items, k):
            yield combo


def exact_min_t_join(g: Graph, t: Iterable[int], eids: Optional[Iterable[int]] = None,
                     lim: OracleLimits = OracleLimits(max_nodes=10, max_edges=22)
                     ) -> frozenset[int]:
    """Smallest edge set whose odd-degree vertices are exactly ``t``."""
    target = set(t)
    if len(target) % 2:
        raise OddVertexCount("T must have even cardinality")
    items = sorted(g.edge_ids() if eids is None else eids)
    _check(g.n, len(items), lim)
    for combo in _subsets_by_size(items):
        deg = degrees(g, combo)
        if all((deg[v] % 2 == 1) == (v in target) for v in range(g.n)):
            return frozenset(combo)
    raise ValueError("no T-join exists (some component holds an odd part of T)")


def exact_min_2edge_cover(g: Graph, lim: OracleLimits = OracleLimits(max_edges=22)
                          ) -> frozenset[int]:
    """Smallest edge set covering every vertex at least twice."""
    items = g.edge_ids()
    _check(g.n, len(items), lim)
    for combo in _subsets_by_size(items, g.n):
        deg = degrees(g, combo)
        if all(d >= 2 for d in deg):
            return frozenset(combo)
    raise ValueError("some vertex has degree below two")


def exact_max_matching_size(g: Graph, lim: OracleLimits = OracleLimits(max_edges=20)) -> int:
    items = g.edge_ids()
    _check(g.n, len(items), lim)
    best = 0

    def rec(i: int, used: frozenset[int], size: int) -> None:
        nonlocal best
        if size + (len(items) - i) <= best:
            return
        if i == len(items):
            best = max(best, size)
            return
        u, v = g.ends(items[i])
        if u != v and u not in used and v not in used:
            rec(i + 1, used | {u, v}, size + 1)
        rec(i + 1, used, size)

    rec(0, frozenset(), 0)
    return best


def exact_max_2_matching_size(g: Graph, lim: OracleLimits = OracleLimits(max_edges=20)) -> int:
    items = g.edge_ids()
    _check(g.n, len(items), lim)
    best = 0
    deg = [0] * g.n

    def rec(i: int, size: int) -> None:
        nonlocal best
        if size + (len(items) - i) <= best:
            return
        if i == len(items):
            best = max(best, size)
            return
        u, v = g.ends(items[i])
        if u != v and deg[u] < 2 and deg[v] < 2:
            deg[u] += 1
            deg[v] += 1
            rec(i + 1, size + 1)
            deg[u] -= 1
            deg[v] -= 1
        rec(i + 1, size)

    rec(0, 0)
    return best


def exact_min_perfect_matching_weight(n: int, weight, lim: OracleLimits = OracleLimits()) -> int:
    """Minimum total weight over all perfect matchings of the complete graph."""
    if n % 2:
        raise OddVertexCount("perfect matching needs an even vertex count")
    if n > lim.max_nodes:
        raise LimitExceeded(f"n={n} exceeds {lim.max_nodes}")

    def rec(rest: tuple[int, ...]) -> int:
        if not rest:
            return 0
        a = rest[0]
        best = None
        for i in range(1, len(rest)):
            b = rest[i]
            val = weight(a, b) + rec(rest[1:i] + rest[i + 1:])
            if best is None or val < best:
                best = val
        return best  # type: ignore[return-value]

    return rec(tuple(range(n)))
