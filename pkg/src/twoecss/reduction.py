"""Recursive reduction from arbitrary 2EC graphs to structured instances.

Line order of the recursion: exact base, cut-node split, loop/parallel
removal, contractible-subgraph contraction, irrelevant-edge deletion,
non-isolating 2-vertex-cut surgery, and finally the structured solver.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from . import kernels
from .errors import NoFeasibleType, NotTwoEC, StructureViolation
from .graph_core import (Derived, Graph, bridges, components, contract, cut_vertices, induced,
                         is_two_edge_connected, is_two_vertex_connected, two_vertex_cuts)
from .oracle import OracleLimits, exact_2ecss, verify_2ec_spanning

StructuredSolver = Callable[[Graph], frozenset]


@dataclass(frozen=True)
class ReductionParams:
    alpha: Fraction = Fraction(5, 4)
    epsilon: Fraction = Fraction(1, 6)
    contractible_bound: int = 6
    exact_base_bound: int = 12

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.alpha < Fraction(6, 5):
            raise ValueError("alpha must be at least 6/5")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.contractible_bound < 3:
            raise ValueError("contractible_bound must be at least 3")
        if self.exact_base_bound < 5:
            raise ValueError("exact_base_bound must be at least 5")

    @property
    def base_gate(self) -> int:
        """Graphs with at most this many nodes are solved exactly."""
        return min(math.floor(2 / self.epsilon), self.exact_base_bound)

    @property
    def search_bound(self) -> int:
        """Largest contractible subgraph searched for, in nodes."""
        return min(math.floor(1 / self.epsilon), self.contractible_bound)

    @property
    def small_side(self) -> int:
        """A cut side with at most this many nodes is handled by A/B/C optima."""
        return self.search_bound - 2

    @property
    def base_limits(self) -> OracleLimits:
        return OracleLimits(max_nodes=self.exact_base_bound, max_edges=10 ** 6)


# ---------------------------------------------------------------------------
# trace


@dataclass
class TraceNode:
    """One call of the recursion.

    ``local`` holds edges this call contributes directly; each child comes
    with a map from its edge ids to ids of this call's graph (``-1`` marks a
    dummy edge that is dropped on the way up).
    """

    kind: str
    n: int
    m: int
    info: dict = field(default_factory=dict)
    local: frozenset = frozenset()
    children: list = field(default_factory=list)  # [(TraceNode, edge_map)]
    result: frozenset = frozenset()
    graph: Optional[Graph] = None  # kept for structured leaves only


@dataclass
class ReductionTrace:
    root: TraceNode

    def walk(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(c for c, _ in reversed(node.children))

    def structured_inputs(self) -> list[Graph]:
        return [t.graph for t in self.walk() if t.kind == "StructuredSolve"]

    def kinds(self) -> list[str]:
        return [t.kind for t in self.walk()]


def replay(node: TraceNode) -> frozenset:
    """Rebuild a call's answer bottom-up from its children and local edges."""
    out = set(node.local)
    for child, emap in node.children:
        for e in replay(child):
            if emap[e] >= 0:
                out.add(emap[e])
    return frozenset(out)


# ---------------------------------------------------------------------------
# structural tests


def _edge_arrays(g: Graph) -> tuple[list[int], list[int], list[int]]:
    ids = g.edge_ids()
    return ids, [g.ends(e)[0] for e in ids], [g.ends(e)[1] for e in ids]


def find_irrelevant_edge(g: Graph, cut_pairs: Optional[set[tuple[int, int]]] = None
                         ) -> Optional[int]:
    """Smallest edge id whose endpoints form a 2-vertex-cut."""
    if cut_pairs is None:
        cut_pairs = {(c.u, c.v) for c in two_vertex_cuts(g)}
    for e, a, b in g.edges():
        if (a, b) in cut_pairs:
            return e
    return None


def connected_subsets(g: Graph, max_size: int, min_size: int = 1) -> list[tuple[int, ...]]:
    """All vertex sets inducing a connected subgraph, ordered by (size, lex)."""
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    found: set[tuple[int, ...]] = set()

    def grow(sub: list[int], ext: set[int], root: int) -> None:
        found.add(tuple(sorted(sub)))
        if len(sub) == max_size:
            return
        ext = set(ext)
        while ext:
            w = ext.pop()
            new_ext = ext | {x for x in adj[w] if x > root and x not in sub
                             and all(x not in adj[y] for y in sub)}
            grow(sub + [w], new_ext, root)

    for v in range(g.n):
        grow([v], {x for x in adj[v] if x > v}, v)
    return sorted((s for s in found if len(s) >= min_size), key=lambda s: (len(s), s))


def _min_inside_below(g: Graph, inside: list[int], ids: list[int], eu: list[int],
                      ev: list[int], limit: int) -> bool:
    """Whether keeping at most ``limit`` of the ``inside`` edges can leave ``g`` 2EC."""
    if limit < 0:
        return False
    pos = {e: i for i, e in enumerate(ids)}
    base = [1] * len(ids)
    for e in inside:
        base[pos[e]] = 0

    def ok(keep: Iterable[int]) -> bool:
        mask = list(base)
        for e in keep:
            mask[pos[e]] = 1
        return kernels.is_two_edge_connected(g.n, eu, ev, mask)

    # supersets of a feasible set stay feasible, so testing size ``limit`` suffices
    k = min(limit, len(inside))
    return any(ok(r) for r in itertools.combinations(inside, k))


def _greedy_inside(g: Graph, inside: list[int], ids: list[int], eu: list[int],
                   ev: list[int]) -> int:
    pos = {e: i for i, e in enumerate(ids)}
    mask = [1] * len(ids)
    kept = len(inside)
    for e in inside:
        mask[pos[e]] = 0
        if kernels.is_two_edge_connected(g.n, eu, ev, mask):
            kept -= 1
        else:
            mask[pos[e]] = 1
    return kept


def find_contractible(g: Graph, p: ReductionParams = ReductionParams()
                      ) -> Optional[tuple[frozenset[int], frozenset[int]]]:
    """First node set ``W`` (by size, then lex) whose best 2EC subgraph is contractible.

    ``W`` qualifies when every 2EC spanning subgraph of ``g`` keeps at least
    ``|OPT'|/alpha`` edges inside ``W``, with ``OPT'`` a minimum 2EC spanning
    subgraph of ``G[W]``.  Returns ``(W, OPT')``.
    """
    ids, eu, ev = _edge_arrays(g)
    for w in connected_subsets(g, p.search_bound, 3):
        inside = g.induced_edges(w)
        if len(inside) < len(w):
            continue
        sub = induced(g, w)
        if not is_two_edge_connected(sub.graph):
            continue
        upper = _greedy_inside(g, inside, ids, eu, ev)
        if upper < Fraction(len(w)) / p.alpha:
            continue
        opt_local = exact_2ecss(sub.graph, OracleLimits(max_nodes=len(w), max_edges=10 ** 6))
        thr = Fraction(len(opt_local)) / p.alpha
        if upper < thr:
            continue
        below = math.ceil(thr) - 1  # largest integer strictly below thr
        if _min_inside_below(g, inside, ids, eu, ev, below):
            continue
        return frozenset(w), frozenset(sub.lift(opt_local))
    return None


@dataclass(frozen=True)
class StructuralReport:
    simple: bool
    two_vertex_connected: bool
    no_irrelevant_edge: bool
    no_non_isolating_cut: bool
    no_contractible: bool

    @property
    def ok(self) -> bool:
        return (self.simple and self.two_vertex_connected and self.no_irrelevant_edge
                and self.no_non_isolating_cut and self.no_contractible)


def structural_checks(g: Graph, p: ReductionParams = ReductionParams()) -> StructuralReport:
    """Recompute every property a structured-solver input must have."""
    cuts = two_vertex_cuts(g)
    pairs = {(c.u, c.v) for c in cuts}
    return StructuralReport(
        simple=g.is_simple(),
        two_vertex_connected=is_two_vertex_connected(g),
        no_irrelevant_edge=find_irrelevant_edge(g, pairs) is None,
        no_non_isolating_cut=all(c.kind == "isolating" for c in cuts),
        no_contractible=find_contractible(g, p) is None,
    )


# ---------------------------------------------------------------------------
# type A/B/C optima on the small side of a cut


@dataclass(frozen=True)
class AbcOptima:
    opt_a: Optional[frozenset[int]]
    opt_b: Optional[frozenset[int]]
    opt_c: Optional[frozenset[int]]
    opt_min: frozenset[int]
    min_type: str


def abc_type(g1: Graph, h: Iterable[int], u: int, v: int) -> Optional[str]:
    """Type of the edge set ``h`` of ``g1`` with respect to ``{u, v}``, or ``None``.

    After shrinking each 2EC piece (isolated nodes included) to a super-node:
    A is a single super-node, B a path between the pieces of ``u`` and ``v``,
    C exactly two isolated super-nodes holding ``u`` and ``v``.
    """
    h = sorted(h)
    br = set(bridges(g1, h))
    pieces = components(g1, [e for e in h if e not in br])
    if len(pieces) == 1:
        return "A"
    piece = [0] * g1.n
    for i, c in enumerate(pieces):
        for x in c:
            piece[x] = i
    pu, pv = piece[u], piece[v]
    if pu == pv:
        return None
    if not br:
        return "C" if len(pieces) == 2 else None
    if len(br) != len(pieces) - 1:
        return None
    deg = [0] * len(pieces)
    for e in br:
        a, b = g1.ends(e)
        deg[piece[a]] += 1
        deg[piece[b]] += 1
    if deg[pu] != 1 or deg[pv] != 1 or any(d != 2 for i, d in enumerate(deg) if i not in (pu, pv)):
        return None
    # a forest with all inner degrees 2 and one edge fewer than nodes is a path
    if len(components(g1, h)) != 1:
        return None
    return "B"


def abc_optima(g1: Graph, u: int, v: int, g2_is_2ec: bool, g2_has_type_ab: bool
               ) -> AbcOptima:
    """Minimum type A, B and C edge sets of the small side ``g1`` by enumeration.

    Type C survives only if the other side is 2EC, type B only if the other
    side admits a type A or B subgraph.  Within a size the first set in id
    order wins; ``opt_min`` breaks size ties as A, then B, then C.
    """
    ids = g1.edge_ids()
    inner = [x for x in range(g1.n) if x not in (u, v)]
    best: dict[str, Optional[frozenset[int]]] = {"A": None, "B": None, "C": None}
    wanted = {"A"} | ({"B"} if g2_has_type_ab else set()) | ({"C"} if g2_is_2ec else set())
    for k in range(len(ids) + 1):
        if all(best[t] is not None for t in wanted):
            break
        for combo in itertools.combinations(ids, k):
            deg = [0] * g1.n
            for e in combo:
                a, b = g1.ends(e)
                deg[a] += 1
                deg[b] += 1
            if any(deg[x] < 2 for x in inner):
                continue
            t = abc_type(g1, combo, u, v)
            if t in wanted and best[t] is None:
                best[t] = frozenset(combo)
    cands = [(len(best[t]), i, t) for i, t in enumerate("ABC") if best[t] is not None]
    if not cands:
        raise NoFeasibleType("no type A, B or C subgraph of the small side is feasible")
    _, _, tmin = min(cands)
    return AbcOptima(best["A"], best["B"], best["C"], best[tmin], tmin)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# the recursion


def _without_edge(g: Graph, e: int) -> Derived:
    h = g.copy()
    h.remove_edge(e)
    emap = [x if h.is_live(x) else -1 for x in range(g.id_bound)]
    return Derived(h, list(range(g.n)), emap)


def _compose(outer: Derived, inner: Derived) -> list[int]:
    """Edge map from ``inner``'s graph to the graph ``outer`` was derived from."""
    return [outer.edge_map[x] if x >= 0 else -1 for x in inner.edge_map]


def _size(g: Graph) -> int:
    return g.n * g.n + g.m * g.m


def _patch(g: Graph, base: set[int], max_extra: int, what: str) -> frozenset[int]:
    """Add at most ``max_extra`` edges of ``g`` to make ``base`` 2EC, fewest first."""
    if is_two_edge_connected(g, base):
        return frozenset()
    from .graph_core import two_ec_pieces
    pieces = two_ec_pieces(g, base)
    where = {}
    for i, c in enumerate(pieces):
        for x in c:
            where[x] = i
    cand = [e for e, a, b in g.edges() if e not in base and where[a] != where[b]]
    for k in range(1, max_extra + 1):
        for extra in itertools.combinations(cand, k):
            if is_two_edge_connected(g, base | set(extra)):
                return frozenset(extra)
    raise StructureViolation(f"no patch set {what} of at most {max_extra} edges exists")


class _Reducer:
    def __init__(self, p: ReductionParams, solver: StructuredSolver) -> None:
        self.p = p
        self.solver = solver

    def child(self, parent: Graph, g: Graph, node: TraceNode, emap: list[int]) -> frozenset:
        if _size(g) >= _size(parent):
            raise AssertionError("recursion did not shrink the instance")
        t = self.run(g)
        node.children.append((t, emap))
        return frozenset(emap[e] for e in t.result if emap[e] >= 0)

    def finish(self, g: Graph, node: TraceNode, result: Iterable[int]) -> TraceNode:
        node.result = frozenset(result)
        verdict = verify_2ec_spanning(g, node.result)
        if not verdict:
            raise StructureViolation(f"{node.kind} returned an infeasible set: {verdict.describe()}")
        return node

    def run(self, g: Graph) -> TraceNode:
        p = self.p
        if g.n <= p.base_gate:
            node = TraceNode("ExactBase", g.n, g.m)
            node.local = exact_2ecss(g, p.base_limits)
            return self.finish(g, node, node.local)

        cuts = cut_vertices(g)
        if cuts:
            v = cuts[0]
            parts = components(g, None, [x for x in range(g.n) if x != v])
            side1 = set(parts[0]) | {v}
            side2 = {x for c in parts[1:] for x in c} | {v}
            node = TraceNode("CutNodeSplit", g.n, g.m, {"v": v, "sides": (side1, side2)})
            out: set[int] = set()
            for side in (side1, side2):
                d = induced(g, side)
                out |= self.child(g, d.graph, node, d.edge_map)
            return self.finish(g, node, out)

        bad = None
        for e, a, b in g.edges():
            if a == b:
                bad = e
                break
        if bad is None:
            for e, a, b in reversed(g.edges()):
                if len(g.edges_between(a, b)) > 1:
                    bad = e
                    break
        if bad is not None:
            node = TraceNode("SimplifyEdge", g.n, g.m, {"e": bad})
            d = _without_edge(g, bad)
            return self.finish(g, node, self.child(g, d.graph, node, d.edge_map))

        hit = find_contractible(g, p)
        if hit is not None:
            w, c = hit
            node = TraceNode("Contract", g.n, g.m, {"W": w, "C_edges": c}, local=c)
            d = contract(g, w)
            rest = self.child(g, d.graph, node, d.edge_map)
            return self.finish(g, node, c | rest)

        cut_list = two_vertex_cuts(g)
        bad = find_irrelevant_edge(g, {(c.u, c.v) for c in cut_list})
        if bad is not None:
            node = TraceNode("DeleteIrrelevant", g.n, g.m, {"e": bad})
            d = _without_edge(g, bad)
            return self.finish(g, node, self.child(g, d.graph, node, d.edge_map))

        for cut in cut_list:
            if cut.kind == "non_isolating" and cut.side_partition is not None:
                return self.surgery(g, cut)

        node = TraceNode("StructuredSolve", g.n, g.m, graph=g)
        node.info["certificate"] = StructuralReport(True, True, True, True, True)
        node.local = frozenset(self.solver(g))
        return self.finish(g, node, node.local)

    def surgery(self, g: Graph, cut) -> TraceNode:
        p = self.p
        u, v = cut.u, cut.v
        v1, v2 = cut.side_partition
        d1 = induced(g, set(v1) | {u, v})
        d2 = induced(g, set(v2) | {u, v})
        if len(v1) > p.small_side:
            node = TraceNode("NonIsolatingLargeSide", g.n, g.m, {"cut": (u, v)})
            h: set[int] = set()
            for d in (d1, d2):
                c = contract(d.graph, {d.vertex_map[u], d.vertex_map[v]})
                h |= self.child(g, c.graph, node, _compose(d, c))
            extra = _patch(g, h, 2, "F'")
            node.info["F'"] = extra
            node.local = extra
            return self.finish(g, node, h | extra)

        g1, g2 = d1.graph, d2.graph
        u1, w1 = d1.vertex_map[u], d1.vertex_map[v]
        u2, w2 = d2.vertex_map[u], d2.vertex_map[v]
        g2_2ec = is_two_edge_connected(g2)
        g2_plus = g2.copy()
        g2_plus.simple_mode = False
        g2_plus.add_edge(u2, w2)
        g2_ab = is_two_edge_connected(g2_plus)
        abc = abc_optima(g1, u1, w1, g2_2ec, g2_ab)
        opt_min = frozenset(d1.lift(abc.opt_min))
        info = {"cut": (u, v), "OPT_1min": opt_min, "type": abc.min_type}
        if abc.opt_c is not None and (abc.opt_b is None or len(abc.opt_c) <= len(abc.opt_b) - 1):
            node = TraceNode("NonIsolatingDummyEdge", g.n, g.m, info)
            emap = d2.edge_map + [-1]
            h2 = self.child(g, g2_plus, node, emap)
            base = set(opt_min) | h2
            extra = _patch(g, base, 1, "F''")
            node.info["F''"] = extra
            node.local = opt_min | extra
            return self.finish(g, node, base | extra)
        node = TraceNode("NonIsolatingDummyNode", g.n, g.m, info)
        g3 = g2.copy()
        g3.simple_mode = False
        w = g3.add_vertex()
        g3.add_edge(w, u2)
        g3.add_edge(w, w2)
        emap = d2.edge_map + [-1, -1]
        h3 = self.child(g, g3, node, emap)
        node.local = opt_min
        return self.finish(g, node, opt_min | h3)


def red_solve(g: Graph, p: ReductionParams = ReductionParams(),
              structured_solver: Optional[StructuredSolver] = None
              ) -> tuple[frozenset[int], ReductionTrace]:
    """Solve 2-ECSS on ``g`` by recursive reduction.

    ``structured_solver`` receives each structured leaf graph and must return
    a 2EC spanning edge set of it.  Every call's answer is verified, and the
    trace replays to exactly the returned set.
    """
    if not is_two_edge_connected(g):
        raise NotTwoEC("reduction needs a 2-edge-connected input")
    if structured_solver is None:
        def structured_solver(h: Graph) -> frozenset:
            raise StructureViolation("a structured instance was reached without a solver")
    root = _Reducer(p, structured_solver).run(g)
    if replay(root) != root.result:
        raise AssertionError("trace replay disagrees with the returned set")
    return root.result, ReductionTrace(root)
