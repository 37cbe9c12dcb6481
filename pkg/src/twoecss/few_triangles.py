"""Solver for covers with few triangle components.

Credits follow scheme F of :mod:`credit_ledger`.  The cover is turned into
a single 2EC spanning subgraph in two phases, and every step is checked to
not raise the cost.

* Bridge covering.  Take a component ``C`` with bridges, collapse its
  blocks and every other component to single nodes, and look at the tree
  ``T_C`` formed by the bridges.  A bridge-covering path leaves ``T_C`` at
  one node and comes back at another, with all inner nodes outside
  ``T_C``.  A cheap path is added directly.  Otherwise a longest path of
  ``T_C`` guides the choice of two paths that together pay for themselves.
* Gluing.  Once every component is 2EC, components are merged: first by
  small rewrites between two or three components, then by a dedicated rule
  when the component graph is a tree, and otherwise along a gluing path
  that is closed by a back edge.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .credit_ledger import component_credit_f, initial_cost_check, measure, monitor_step
from .errors import StructureViolation, ThreeOptimalityBreach
from .graph_core import (Graph, boundary_edges, bridges, component_graph, components,
                         decompose, find_3_matching, is_two_edge_connected)

# components whose entry and exit nodes on a gluing path must be adjacent
SMALL = ("triangle", "cycle4")
CYCLES = ("triangle", "cycle4", "cycle5", "cycle6")


class _NoWitness(Exception):
    """A case of the bridge-covering analysis found no usable witness."""


# ---------------------------------------------------------------------------
# bridge trees and bridge-covering paths


@dataclass
class BridgeTree:
    """The contracted graph ``G_C`` around one non-2EC component ``C``.

    Blocks of ``C`` and all other components of ``S`` are single nodes.
    ``bridge_edges`` are the edges of the tree ``T_C``.
    """

    host_component: int
    tree: Graph
    node_kind: list[str]
    bridge_edges: dict[int, int]
    original: dict[int, int]
    node_of: list[int]

    def in_tree(self, x: int) -> bool:
        return self.node_kind[x] != "foreign"

    @property
    def tree_nodes(self) -> list[int]:
        return [x for x, k in enumerate(self.node_kind) if k != "foreign"]

    def tree_adj(self) -> dict[int, list[tuple[int, int]]]:
        adj: dict[int, list[tuple[int, int]]] = {x: [] for x in self.tree_nodes}
        for te in sorted(self.bridge_edges):
            a, b = self.tree.ends(te)
            adj[a].append((b, te))
            adj[b].append((a, te))
        return adj

    def tree_path(self, u: int, v: int) -> list[int]:
        """Nodes of the ``u``-``v`` path in ``T_C``."""
        adj = self.tree_adj()
        parent = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y, _ in adj[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        return out[::-1]

    def tree_edge(self, u: int, v: int) -> int:
        """Original id of the bridge joining adjacent tree nodes ``u`` and ``v``."""
        for te, e in self.bridge_edges.items():
            if set(self.tree.ends(te)) == {u, v}:
                return e
        raise KeyError((u, v))


def build_bridge_tree(g: Graph, s: Iterable[int], index: int = 0) -> BridgeTree:
    """Bridge tree of the ``index``-th non-2EC component of ``s``."""
    s = frozenset(s)
    d = decompose(g, s)
    c = d.non_2ec[index]
    node_of = [-1] * g.n
    kind: list[str] = []
    for b in c.blocks:
        for v in d.blocks[b].nodes:
            node_of[v] = len(kind)
        kind.append("block")
    for v in sorted(c.lonely):
        node_of[v] = len(kind)
        kind.append("lonely")
    for comp in components(g, s):
        if node_of[comp[0]] != -1:
            continue
        for v in comp:
            node_of[v] = len(kind)
        kind.append("foreign")
    tree = Graph(len(kind), simple_mode=False)
    original: dict[int, int] = {}
    bridge_edges: dict[int, int] = {}
    for e in g.edge_ids():
        a, b = (node_of[x] for x in g.ends(e))
        if a == b:
            continue
        te = tree.add_edge(a, b)
        original[te] = e
        if e in c.bridges:
            bridge_edges[te] = e
    bt = BridgeTree(index, tree, kind, bridge_edges, original, node_of)
    for x, nb in bt.tree_adj().items():
        if len(nb) == 1 and kind[x] != "block":
            raise StructureViolation(f"leaf {x} of the bridge tree is not a block")
    return bt


def _search(bt: BridgeTree, sources: Iterable[int]) -> dict[int, Optional[tuple[int, int]]]:
    """Parent pointers of a BFS that leaves ``sources`` along non-tree edges.

    Foreign nodes are expanded; tree nodes outside ``sources`` are only
    recorded (a bridge-covering path cannot pass through ``T_C``).
    """
    src = set(sources)
    parent: dict[int, Optional[tuple[int, int]]] = {x: None for x in sorted(src)}
    queue = deque(sorted(src))
    while queue:
        x = queue.popleft()
        for te in sorted(bt.tree.incident(x)):
            if te in bt.bridge_edges:
                continue
            y = bt.tree.other(te, x)
            if y in parent:
                continue
            parent[y] = (x, te)
            if not bt.in_tree(y):
                queue.append(y)
    return parent


def reachable_set(bt: BridgeTree, w: Iterable[int], g: Optional[Graph] = None) -> set[int]:
    """Tree nodes outside ``w`` joined to some node of ``w`` by a bridge-covering path."""
    w = set(w)
    if not all(bt.in_tree(x) for x in w):
        raise ValueError("reachable_set needs nodes of the bridge tree")
    return {x for x in _search(bt, w) if bt.in_tree(x) and x not in w}


@dataclass(frozen=True)
class BridgeCoveringPath:
    edges: tuple[int, ...]          # original edge ids, from the first endpoint
    endpoints: tuple[int, int]
    inner: frozenset[int]           # foreign nodes passed through
    bl: int
    br: int

    @property
    def cheap(self) -> bool:
        return Fraction(self.br, 4) + self.bl - 2 >= 0


def covering_path(bt: BridgeTree, u: int, v: int) -> BridgeCoveringPath:
    parent = _search(bt, [u])
    if v not in parent or v == u:
        raise _NoWitness(f"no bridge-covering path between {u} and {v}")
    edges, inner = [], set()
    x = v
    while parent[x] is not None:
        p, te = parent[x]
        edges.append(bt.original[te])
        if p != u:
            inner.add(p)
        x = p
    nodes = bt.tree_path(u, v)
    bl = sum(1 for y in nodes if bt.node_kind[y] == "block")
    return BridgeCoveringPath(tuple(edges[::-1]), (u, v), frozenset(inner), bl, len(nodes) - 1)


def find_cheap_path(bt: BridgeTree) -> Optional[BridgeCoveringPath]:
    """The cheap bridge-covering path with the most credit to spare, if any."""
    best = None
    for u in bt.tree_nodes:
        for v in sorted(reachable_set(bt, [u])):
            if v < u:
                continue
            nodes = bt.tree_path(u, v)
            bl = sum(1 for y in nodes if bt.node_kind[y] == "block")
            score = (len(nodes) - 1) + 4 * bl
            if score >= 8 and (best is None or score > best[0]):
                best = (score, u, v)
    if best is None:
        return None
    return covering_path(bt, best[1], best[2])


def _longest_tree_path(bt: BridgeTree) -> list[int]:
    adj = bt.tree_adj()

    def farthest(src: int) -> tuple[int, dict[int, Optional[int]]]:
        dist = {src: 0}
        parent: dict[int, Optional[int]] = {src: None}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y, _ in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
        top = max(dist.values())
        return min(x for x, dd in dist.items() if dd == top), parent

    b, _ = farthest(min(adj))
    end, parent = farthest(b)
    path = [end]
    while path[-1] != b:
        path.append(parent[path[-1]])
    return path[::-1]


def _merge_two(bt: BridgeTree, s: frozenset, b: int, u: int, b2: int, u2: int) -> frozenset:
    """Add a ``b``-``u`` path and a ``b2``-``u2`` path that share no inner node."""
    p1 = covering_path(bt, b, u)
    p2 = covering_path(bt, b2, u2)
    if p1.inner & p2.inner:
        raise _NoWitness("the two covering paths meet outside the tree")
    return s | set(p1.edges) | set(p2.edges)


def _longest_path_cases(bt: BridgeTree, s: frozenset) -> tuple[frozenset, str]:
    """No cheap path exists: pick two paths by the longest-path case analysis."""
    adj = bt.tree_adj()
    kind = bt.node_kind
    path = _longest_tree_path(bt)
    if len(path) < 4:
        raise _NoWitness("bridge tree too shallow for the case analysis")
    b, u1, u2, u3 = path[:4]
    hang: dict[int, int] = {}          # off-path node -> index i of the u_i it hangs from
    on_path = set(path)
    for i, ui in enumerate(path[1:], 1):
        queue = deque([ui])
        while queue:
            x = queue.popleft()
            for y, _ in adj[x]:
                if y not in on_path and y not in hang:
                    hang[y] = i
                    queue.append(y)
    reach_b = reachable_set(bt, [b])
    if any(kind[x] == "block" for x in reach_b):
        raise _NoWitness("a block is reachable from b, so a cheap path was missed")
    if any(x not in (u1, u2, u3) and hang.get(x) not in (1, 2) for x in reach_b):
        raise _NoWitness("case (1): a far node is reachable from b")
    near = sorted(x for x in reach_b if hang.get(x) in (1, 2))
    if near:
        # case (2): a lonely node next to u2, with a leaf block below it
        u = near[0]
        if hang[u] != 2 or kind[u] != "lonely" or u2 not in (y for y, _ in adj[u]):
            raise _NoWitness("case (2): reachable node is not a lonely child of u2")
        leaves = sorted(y for y, _ in adj[u] if y != u2 and len(adj[y]) == 1)
        if not leaves:
            raise _NoWitness("case (2): no leaf block below the reachable node")
        b2 = leaves[0]
        cand = sorted(x for x in reachable_set(bt, [b2])
                      if x not in (b, u) and kind[x] == "lonely")
        if not cand:
            raise _NoWitness("case (2): second leaf reaches no other lonely node")
        return _merge_two(bt, s, b, u, b2, cand[0]), "two-paths-near"
    if reach_b - {u1} != {u2, u3}:
        raise _NoWitness("case (3): b does not reach exactly u2 and u3")
    side = sorted(x for x, i in hang.items() if i in (1, 2) and len(adj[x]) == 1)
    if side:
        # case (3.a)
        b2 = side[0]
        l2 = adj[b2][0][0]
        cand = sorted(x for x in reachable_set(bt, [b2]) - {l2} if kind[x] == "lonely")
        if not cand:
            raise _NoWitness("case (3.a): side leaf reaches no lonely node")
        return _merge_two(bt, s, b, u3, b2, cand[0]), "two-paths-side"
    # case (3.b)
    reach_w = reachable_set(bt, [b, u1])
    blocks = sorted(x for x in reach_w if kind[x] == "block")
    if blocks:
        return _merge_two(bt, s, b, u2, blocks[0], u1), "two-paths-block"
    cand = sorted(x for x in reach_w - {u2, u3} if kind[x] == "lonely")
    if not cand:
        raise _NoWitness("case (3.b): u1 reaches no further lonely node")
    p1 = covering_path(bt, b, u2)
    p2 = covering_path(bt, cand[0], u1)
    if p1.inner & p2.inner:
        raise _NoWitness("case (3.b): the two paths meet")
    drop = bt.tree_edge(u1, u2)
    return (s | set(p1.edges) | set(p2.edges)) - {drop}, "two-paths-drop-bridge"


def _bridge_result_ok(g: Graph, s: frozenset, new_s: frozenset, old_bridges: frozenset) -> bool:
    return set(bridges(g, new_s)) < set(old_bridges) and not _low_degree(g, new_s)


def _low_degree(g: Graph, s: Iterable[int]) -> bool:
    deg = [0] * g.n
    for e in s:
        u, v = g.ends(e)
        deg[u] += 1
        deg[v] += 1
    return any(x < 2 for x in deg)


def _search_bridge_pairs(g: Graph, s: frozenset, bt: BridgeTree, old_bridges: frozenset,
                         limit: int = 4000) -> Optional[frozenset]:
    """Fallback: any one or two covering paths (maybe minus a bridge) that pay off."""
    paths = []
    for u in bt.tree_nodes:
        for v in sorted(reachable_set(bt, [u])):
            if v > u:
                paths.append(covering_path(bt, u, v))
    _, before = measure(g, s, "F")
    tried = 0
    for p, q in itertools.chain(((p, None) for p in paths),
                                itertools.combinations(paths, 2)):
        if q is not None and p.inner & q.inner:
            continue
        tried += 1
        if tried > limit:
            return None
        base = s | set(p.edges) | (set(q.edges) if q else set())
        shared = set(bt.tree_path(*p.endpoints))
        drops: list[Optional[int]] = [None]
        if q is not None:
            both = shared & set(bt.tree_path(*q.endpoints))
            drops += sorted(bt.tree_edge(x, y) for x, y in itertools.permutations(both, 2)
                            if x < y and any(z == y for z, _ in bt.tree_adj()[x]))
        for drop in drops:
            new_s = base - {drop} if drop is not None else base
            if not _bridge_result_ok(g, s, new_s, old_bridges):
                continue
            _, after = measure(g, new_s, "F")
            if after.cost <= before.cost:
                return new_s
    return None


def bridge_cover_step(g: Graph, s: Iterable[int], log: Optional[list] = None) -> frozenset[int]:
    """Remove at least one bridge of ``s`` without raising the cost or adding bridges."""
    s = frozenset(s)
    d = decompose(g, s)
    if not d.non_2ec:
        raise ValueError("bridge_cover_step needs a cover with a bridge")
    bt = build_bridge_tree(g, s, 0)
    cheap = find_cheap_path(bt)
    if cheap is not None:
        new_s, label = s | set(cheap.edges), "cheap-path"
    else:
        try:
            new_s, label = _longest_path_cases(bt, s)
            if not _bridge_result_ok(g, s, new_s, d.bridges):
                raise _NoWitness("case result does not remove bridges cleanly")
            _, before = measure(g, s, "F")
            _, after = measure(g, new_s, "F")
            if after.cost > before.cost:
                raise _NoWitness("case result raises the cost")
        except _NoWitness:
            found = _search_bridge_pairs(g, s, bt, d.bridges)
            if found is None:
                raise StructureViolation("no bridge-covering move keeps the cost")
            new_s, label = found, "path-pair-search"
    if not _bridge_result_ok(g, s, new_s, d.bridges):
        raise StructureViolation(f"{label} did not shrink the bridge set")
    _, before = measure(g, s, "F")
    _, after = measure(g, new_s, "F")
    monitor_step(before, after, label, log)
    return new_s


# ---------------------------------------------------------------------------
# 2EC components and local merges


class _Comps:
    """The 2EC components of ``s`` with a vertex index."""

    def __init__(self, g: Graph, s: frozenset):
        d = decompose(g, s)
        if d.non_2ec:
            raise StructureViolation("gluing needs every component to be 2EC")
        self.s = s
        self.items = sorted(d.two_ec_components, key=lambda c: min(c.nodes))
        self.where = [0] * g.n
        for i, c in enumerate(self.items):
            for v in c.nodes:
                self.where[v] = i
        self._m3: dict[tuple[int, int], Optional[tuple[int, ...]]] = {}
        self.g = g

    def __len__(self) -> int:
        return len(self.items)

    def kind(self, i: int) -> str:
        return self.items[i].size_class

    def credit(self, i: int) -> Fraction:
        return component_credit_f(self.items[i].size_class)

    def edge_in(self, i: int, x: int, y: int) -> Optional[int]:
        """Solution edge of component ``i`` joining ``x`` and ``y``."""
        for e in self.g.edges_between(x, y):
            if e in self.items[i].edges:
                return e
        return None

    def side(self, e: int, i: int) -> int:
        u, v = self.g.ends(e)
        return u if self.where[u] == i else v

    def between(self, i: int, j: int) -> list[int]:
        return boundary_edges(self.g, self.items[i].nodes, self.items[j].nodes)

    def matching(self, i: int, j: int) -> Optional[tuple[int, ...]]:
        key = (min(i, j), max(i, j))
        if key not in self._m3:
            self._m3[key] = find_3_matching(self.g, self.items[key[0]].nodes,
                                            self.items[key[1]].nodes).matching
        return self._m3[key]

    def neighbours(self, i: int) -> list[int]:
        out = set()
        for v in self.items[i].nodes:
            for w in self.g.neighbors(v):
                if self.where[w] != i:
                    out.add(self.where[w])
        return sorted(out)


def _adjacent_pair(cs: _Comps, edges: Sequence[int], i: int,
                   j: Optional[int] = None) -> Optional[tuple[int, int, int, Optional[int]]]:
    """Two of ``edges`` whose ends in ``i`` are adjacent there.

    With ``j`` given, their ends in ``j`` must be adjacent too.  Returns the
    two edges, the edge of ``i`` between their ends, and that of ``j``.
    """
    for e, f in itertools.combinations(sorted(edges), 2):
        x, y = cs.side(e, i), cs.side(f, i)
        ci = cs.edge_in(i, x, y) if x != y else None
        if ci is None:
            continue
        if j is None:
            return e, f, ci, None
        a, b = cs.side(e, j), cs.side(f, j)
        cj = cs.edge_in(j, a, b) if a != b else None
        if cj is not None:
            return e, f, ci, cj
    return None


def _breach(cs: _Comps, i: int, j: int) -> ThreeOptimalityBreach:
    hit = _adjacent_pair(cs, cs.between(i, j), i, j)
    if hit is None:
        return StructureViolation(
            f"components {i} and {j} admit a 3-matching but no size-preserving swap")
    return ThreeOptimalityBreach(
        f"swapping {sorted(hit[2:])} for {sorted(hit[:2])} merges a {cs.kind(i)} "
        f"and a {cs.kind(j)} at equal size")


def _pairs_2ec(pairs: Sequence[tuple[int, int]]) -> bool:
    """2EC test for a small multigraph given as vertex pairs."""
    verts = sorted({x for p in pairs for x in p})
    index = {v: k for k, v in enumerate(verts)}
    h = Graph(len(verts), [(index[a], index[b]) for a, b in pairs], simple_mode=False)
    return is_two_edge_connected(h)


def c5c4_nine(g: Graph, five: frozenset, four: frozenset, five_nodes: frozenset,
              four_nodes: frozenset, x: int, y: int) -> Optional[frozenset[int]]:
    """Nine edges that, with a virtual edge ``xy``, span a 5-cycle and a 4-cycle 2EC.

    Every such set used by the analysis drops one edge of each cycle and
    adds two edges between them, so those are the candidates tried.
    """
    cross = boundary_edges(g, five_nodes, four_nodes)
    for a in sorted(five):
        for b in sorted(four):
            for p, q in itertools.combinations(cross, 2):
                f = (set(five) - {a}) | (set(four) - {b}) | {p, q}
                if _pairs_2ec([g.ends(e) for e in f] + [(x, y)]):
                    return frozenset(f)
    return None


def local_merge(g: Graph, s: Iterable[int]) -> Optional[tuple[frozenset[int], str]]:
    """Merge two or three 2EC components by a small rewrite, if one applies."""
    cs = _Comps(g, frozenset(s))
    s = cs.s
    n = len(cs)
    pairs = [(i, j) for i in range(n) for j in cs.neighbours(i)]

    def matched(i, j):
        return cs.matching(i, j) is not None

    # a 4-cycle and anything but a 5-cycle
    for i, j in pairs:
        if cs.kind(i) == "cycle4" and cs.kind(j) != "cycle5" and matched(i, j):
            if cs.kind(j) in ("triangle", "cycle4"):
                raise _breach(cs, i, j)
            e, f, ci, _ = _adjacent_pair(cs, cs.matching(i, j), i)
            return (s - {ci}) | {e, f}, "merge-4cycle"
    # a triangle and anything but a 6-cycle
    for i, j in pairs:
        if cs.kind(i) == "triangle" and cs.kind(j) != "cycle6" and matched(i, j):
            if cs.kind(j) in ("triangle", "cycle5"):
                raise _breach(cs, i, j)
            e, f, ci, _ = _adjacent_pair(cs, cs.matching(i, j), i)
            return (s - {ci}) | {e, f}, "merge-triangle"
    # a 5-cycle and anything but a 4-cycle (triangles were handled above)
    for i, j in pairs:
        if cs.kind(i) == "cycle5" and cs.kind(j) not in ("cycle4", "triangle") and matched(i, j):
            hit = _adjacent_pair(cs, cs.matching(i, j), i)
            if hit is None:
                raise StructureViolation("5-cycle matching has no adjacent pair")
            e, f, ci, _ = hit
            return (s - {ci}) | {e, f}, "merge-5cycle"
    # two large components
    for i, j in pairs:
        if cs.kind(i) == cs.kind(j) == "large" and matched(i, j):
            e, f = sorted(cs.matching(i, j))[:2]
            return s | {e, f}, "merge-large"
    # a 4-cycle between two 5-cycles
    for i in range(n):
        if cs.kind(i) != "cycle4":
            continue
        fives = [j for j in cs.neighbours(i) if cs.kind(j) == "cycle5" and matched(i, j)]
        if len(fives) >= 2:
            j, k = fives[:2]
            e1, f1, c2, _ = _adjacent_pair(cs, cs.matching(i, j), j)
            e2, f2, c3, _ = _adjacent_pair(cs, cs.matching(i, k), k)
            return (s - {c2, c3}) | {e1, f1, e2, f2}, "merge-4cycle-two-5cycles"
    # a 5-cycle between two 4-cycles
    for i in range(n):
        if cs.kind(i) != "cycle5":
            continue
        fours = [j for j in cs.neighbours(i) if cs.kind(j) == "cycle4" and matched(i, j)]
        if len(fours) >= 2:
            j, k = fours[:2]
            hit = _adjacent_pair(cs, cs.matching(i, j), j)
            if hit is None:
                raise StructureViolation("4-cycle matching has no adjacent pair")
            e, f, cz, _ = hit
            vi, vj = cs.side(e, i), cs.side(f, i)
            nine = c5c4_nine(g, cs.items[i].edges, cs.items[k].edges, cs.items[i].nodes,
                             cs.items[k].nodes, vi, vj)
            if nine is None:
                raise StructureViolation("no nine-edge span of a 5-cycle and a 4-cycle")
            new = (s - cs.items[i].edges - cs.items[k].edges - {cz}) | nine | {e, f}
            return new, "merge-5cycle-two-4cycles"
    return None


# ---------------------------------------------------------------------------
# the tree case


def _cycle_nodes(g: Graph, edges: Iterable[int]) -> list[int]:
    """Vertices of a cycle in traversal order from its smallest vertex."""
    edges = set(edges)
    start = min(x for e in edges for x in g.ends(e))
    order, prev, cur = [start], None, start
    while True:
        nxt = None
        for e in sorted(g.incident(cur)):
            if e in edges and e != prev:
                nxt = e
                break
        prev, cur = nxt, g.other(nxt, cur)
        if cur == start:
            return order
        order.append(cur)


def _edges_from(cs: _Comps, v: int, j: int) -> list[int]:
    return sorted(e for e in cs.g.incident(v) if cs.where[cs.g.other(e, v)] == j)


def glue_tree_case(g: Graph, s: Iterable[int]) -> tuple[frozenset[int], str]:
    """Gluing step for a tree-shaped component graph (no local merge applies)."""
    cs = _Comps(g, frozenset(s))
    s = cs.s
    kinds = [cs.kind(i) for i in range(len(cs))]
    if "cycle4" in kinds or "cycle5" in kinds:
        raise StructureViolation("4- or 5-cycle survives in a tree-shaped component graph")
    sixes = [i for i, k in enumerate(kinds) if k == "cycle6"]
    if not sixes:
        raise StructureViolation("tree-shaped component graph without a 6-cycle")
    for c in sixes:
        ring = _cycle_nodes(g, cs.items[c].edges)
        nbrs = cs.neighbours(c)
        for j in nbrs:
            if cs.matching(c, j) is None:
                raise StructureViolation(f"no 3-matching across tree edge {c}-{j}")
        # (a) a triangle touching two adjacent nodes of the 6-cycle
        for j in nbrs:
            if kinds[j] == "triangle":
                hit = _adjacent_pair(cs, cs.between(c, j), c, j)
                if hit is not None:
                    raise _breach(cs, c, j)
        # (b) a 6-cycle or large neighbour touching two adjacent nodes
        for j in nbrs:
            if kinds[j] != "triangle":
                hit = _adjacent_pair(cs, cs.between(c, j), c)
                if hit is not None:
                    e, f, ci, _ = hit
                    return (s - {ci}) | {e, f}, "tree-adjacent-pair"
        # (c) every neighbour sees only odd or only even positions
        touch = {j: {ring.index(cs.side(e, c)) % 2 for e in cs.between(c, j)} for j in nbrs}
        if any(len(t) != 1 for t in touch.values()):
            raise StructureViolation("neighbour of a 6-cycle touches both parities")
        odd = [j for j in nbrs if touch[j] == {1}]
        even = [j for j in nbrs if touch[j] == {0}]
        if not odd or not even:
            res = _tree_chord(cs, c, ring, 0 if odd else 1, odd or even)
        else:
            res = _tree_both_sides(cs, c, ring, odd[0], even[0])
        if res is not None:
            return res
    raise StructureViolation("tree case found no applicable rewrite")


def _tree_chord(cs: _Comps, c: int, ring: list[int], free: int, attached: list[int]):
    """One parity class of the 6-cycle is unattached: use a chord inside it."""
    g, s = cs.g, cs.s
    free_nodes = ring[free::2]
    for x, y in itertools.combinations(free_nodes, 2):
        chord = g.edge_between(x, y)
        if chord is None:
            continue
        ix, iy = ring.index(x), ring.index(y)
        for a, b, ia, ib in ((x, y, ix, iy), (y, x, iy, ix)):
            mid = ring[(ia + 1) % 6] if (ia + 2) % 6 == ib else ring[(ia - 1) % 6]
            z = next(w for w in (ring[(ib + 1) % 6], ring[(ib - 1) % 6]) if w != mid)
            for j in attached:
                for em in _edges_from(cs, mid, j):
                    for ez in _edges_from(cs, z, j):
                        if g.other(em, mid) == g.other(ez, z):
                            continue
                        if cs.kind(j) == "triangle":
                            raise ThreeOptimalityBreach(
                                "6-cycle chord swap merges a triangle at equal size")
                        new = (s - {cs.edge_in(c, a, mid), cs.edge_in(c, b, z)}) | {em, ez, chord}
                        nodes = cs.items[c].nodes | cs.items[j].nodes
                        if is_two_edge_connected(g, new, nodes):
                            return new, "tree-chord"
    if not any(g.edge_between(x, y) is not None
               for x, y in itertools.combinations(free_nodes, 2)):
        raise StructureViolation("6-cycle with an unattached, chordless side is contractible")
    return None


def _tree_both_sides(cs: _Comps, c: int, ring: list[int], jo: int, je: int):
    """Neighbours on both parities: route the 6-cycle through both of them."""
    g, s = cs.g, cs.s
    nodes = cs.items[c].nodes | cs.items[jo].nodes | cs.items[je].nodes
    for start in range(6):
        for step in (1, -1):
            p = [ring[(start + step * k) % 6] for k in range(4)]
            if ring.index(p[0]) % 2 != 1:
                continue
            for eo in itertools.product(_edges_from(cs, p[0], jo), _edges_from(cs, p[2], jo)):
                uo = [g.other(eo[0], p[0]), g.other(eo[1], p[2])]
                if uo[0] == uo[1]:
                    continue
                for ee in itertools.product(_edges_from(cs, p[1], je), _edges_from(cs, p[3], je)):
                    ue = [g.other(ee[0], p[1]), g.other(ee[1], p[3])]
                    if ue[0] == ue[1]:
                        continue
                    drop = {cs.edge_in(c, p[0], p[1]), cs.edge_in(c, p[2], p[3])}
                    for j, (a, b) in ((jo, uo), (je, ue)):
                        if cs.kind(j) == "triangle":
                            drop.add(cs.edge_in(j, a, b))
                    new = (s - drop) | set(eo) | set(ee)
                    if is_two_edge_connected(g, new, nodes):
                        return new, "tree-both-sides"
    return None


# ---------------------------------------------------------------------------
# the non-tree case: gluing paths


@dataclass(frozen=True)
class PeeledCore:
    surviving_components: frozenset[int]
    peeled: dict = field(default_factory=dict)   # peeled component -> root in the core


def peel(cs: _Comps) -> PeeledCore:
    """Repeatedly drop components of degree one in the component graph."""
    nb = {i: set(cs.neighbours(i)) for i in range(len(cs))}
    alive = set(nb)
    parent: dict[int, int] = {}
    order = []
    queue = deque(sorted(i for i in alive if len(nb[i]) == 1))
    while queue:
        i = queue.popleft()
        if i not in alive or len(nb[i] & alive) != 1:
            continue
        (p,) = nb[i] & alive
        alive.discard(i)
        parent[i] = p
        order.append(i)
        if len(nb[p] & alive) == 1:
            queue.append(p)
    root: dict[int, int] = {}
    for i in reversed(order):
        p = parent[i]
        root[i] = root.get(p, p)
    return PeeledCore(frozenset(alive), root)


@dataclass(frozen=True)
class GluingPath:
    """Edges ``e_1..e_l`` visiting distinct components ``C_0..C_l``."""

    edges: tuple[int, ...]
    comps: tuple[int, ...]

    def ins(self, cs: _Comps) -> list[Optional[int]]:
        return [None] + [cs.side(e, c) for e, c in zip(self.edges, self.comps[1:])]

    def outs(self, cs: _Comps) -> list[Optional[int]]:
        return [cs.side(e, c) for e, c in zip(self.edges, self.comps)] + [None]

    def valid(self, cs: _Comps, core: frozenset) -> bool:
        if len(set(self.comps)) != len(self.comps) or not set(self.comps) <= core:
            return False
        if len(self.edges) != len(self.comps) - 1:
            return False
        for e, a, b in zip(self.edges, self.comps, self.comps[1:]):
            if {cs.where[x] for x in cs.g.ends(e)} != {a, b}:
                return False
        ins, outs = self.ins(cs), self.outs(cs)
        for k in range(1, len(self.comps) - 1):
            if cs.kind(self.comps[k]) in SMALL:
                if ins[k] == outs[k] or cs.edge_in(self.comps[k], ins[k], outs[k]) is None:
                    return False
        return True


def _chords(cs: _Comps, i: int) -> list[int]:
    item = cs.items[i]
    if len(item.nodes) > 6:
        return []
    return sorted(e for e in cs.g.induced_edges(item.nodes) if e not in item.edges)


def _close(cs: _Comps, path: GluingPath, k: int, back: int,
           pendants: Sequence[int]) -> Optional[frozenset[int]]:
    """Close ``path`` with ``back`` (from ``C_l`` to ``C_k``) if the cost allows.

    Inner triangles and 4-cycles lose their entry-exit edge.  On top of
    that a few more edges at the attachment points may go, possibly with a
    chord of a small end component, or a small pendant of ``C_l`` may be
    folded in by exchanging one edge of each cycle for two edges between
    them.
    """
    g, s = cs.g, cs.s
    l = len(path.edges)
    ins, outs = path.ins(cs), path.outs(cs)
    members = path.comps[k:]
    add = set(path.edges[k:]) | {back}
    drop = {cs.edge_in(path.comps[j], ins[j], outs[j])
            for j in range(k + 1, l) if cs.kind(path.comps[j]) in SMALL}
    nodes = frozenset().union(*(cs.items[i].nodes for i in members))
    if len(nodes) < 7:
        return None
    credit = sum((cs.credit(i) for i in members), Fraction(0))
    base = (s - drop) | add
    budget = len(s) + credit - 2          # largest admissible size of the result
    ends = {x for e in add for x in g.ends(e)}
    pool = sorted(e for e in base - add
                  if cs.where[g.ends(e)[0]] in members and ends & set(g.ends(e)))
    chords = _chords(cs, path.comps[l]) + (_chords(cs, path.comps[k]) if k != l else [])
    for r in range(3):
        if len(base) - r > budget + 1:
            continue
        for cut in itertools.combinations(pool, r):
            trial = base - set(cut)
            if len(trial) <= budget and is_two_edge_connected(g, trial, nodes):
                return trial
            if r and len(trial) + 1 <= budget:
                for ch in chords:
                    t2 = trial | {ch}
                    if is_two_edge_connected(g, t2, nodes):
                        return t2
    last = path.comps[l]
    for q in pendants:
        item, end = cs.items[q], cs.items[last]
        if item.size_class not in CYCLES or end.size_class not in CYCLES:
            continue
        q_nodes = nodes | item.nodes
        q_budget = budget + cs.credit(q)
        if len(base) > q_budget:
            continue
        cross = cs.between(last, q)
        for a in sorted(end.edges - drop):
            for b in sorted(item.edges):
                for p1, p2 in itertools.combinations(cross, 2):
                    trial = (base - {a, b}) | {p1, p2}
                    if len(trial) <= q_budget and is_two_edge_connected(g, trial, q_nodes):
                        return trial
    return None


def glue_non_tree_case(g: Graph, s: Iterable[int], limit: int = 4000
                       ) -> tuple[frozenset[int], str]:
    """Grow, rotate and close gluing paths over the peeled core until one closes."""
    cs = _Comps(g, frozenset(s))
    core = peel(cs)
    alive = core.surviving_components
    if not alive:
        raise StructureViolation("component graph is a tree; use the tree case")
    pend: dict[int, list[int]] = {}
    for i, r in core.peeled.items():
        if r in cs.neighbours(i):
            pend.setdefault(r, []).append(i)
    stack: list[GluingPath] = []
    for c0 in sorted(alive, reverse=True):
        for e in sorted(boundary_edges(g, cs.items[c0].nodes,
                                       [v for v in range(g.n) if cs.where[v] in alive
                                        and cs.where[v] != c0]), reverse=True):
            c1 = cs.where[g.other(e, cs.side(e, c0))]
            stack.append(GluingPath((e,), (c0, c1)))
    seen: set[GluingPath] = set()
    while stack:
        path = stack.pop()
        if path in seen or not path.valid(cs, alive):
            continue
        seen.add(path)
        if len(seen) > limit:
            break
        l = len(path.edges)
        end = path.comps[l]
        pos = {c: i for i, c in enumerate(path.comps)}
        backs = []
        for v in sorted(cs.items[end].nodes):
            for e in sorted(g.incident(v)):
                w = cs.where[g.other(e, v)]
                if w in pos and pos[w] < l and e != path.edges[-1]:
                    backs.append((pos[w], e))
        for k, e in sorted(backs):
            closed = _close(cs, path, k, e, sorted(pend.get(end, ())))
            if closed is not None:
                return closed, "gluing-path"
        nxt: list[GluingPath] = []
        for k, e in sorted(backs, reverse=True):
            if k == l - 1:
                nxt.append(GluingPath(path.edges[:-1] + (e,), path.comps))
            else:
                edges = path.edges[:k] + (e,) + tuple(reversed(path.edges[k + 1:]))
                comps = path.comps[:k + 1] + tuple(reversed(path.comps[k + 1:]))
                nxt.append(GluingPath(edges, comps))
        ins = path.ins(cs)
        for v in sorted(cs.items[end].nodes, reverse=True):
            if cs.kind(end) in SMALL and (v == ins[l] or cs.edge_in(end, v, ins[l]) is None):
                continue
            for e in sorted(g.incident(v), reverse=True):
                w = cs.where[g.other(e, v)]
                if w in alive and w not in pos:
                    nxt.append(GluingPath(path.edges + (e,), path.comps + (w,)))
        stack.extend(nxt)
    raise StructureViolation("no gluing path closes within the search limit")


# ---------------------------------------------------------------------------
# driver


def _check_invariant(g: Graph, s: frozenset, originals: frozenset) -> None:
    for c in decompose(g, s).two_ec_components:
        if c.size_class == "large":
            continue
        if c.size_class in CYCLES and c.nodes in originals:
            continue
        raise StructureViolation(
            f"2EC component on {sorted(c.nodes)} is neither an original short cycle nor large")


def gluing_step(g: Graph, s: Iterable[int], log: Optional[list] = None,
                originals: frozenset = frozenset()) -> frozenset[int]:
    """One cost-monitored merge of 2EC components."""
    s = frozenset(s)
    res = local_merge(g, s)
    if res is None:
        cg, _ = component_graph(g, s)
        res = glue_tree_case(g, s) if cg.m == cg.n - 1 else glue_non_tree_case(g, s)
    new_s, label = res
    _, before = measure(g, s, "F")
    _, after = measure(g, new_s, "F")
    monitor_step(before, after, label, log)
    old = components(g, s)
    parts = components(g, new_s)
    if len(parts) >= len(old):
        raise StructureViolation(f"{label} did not reduce the component count")
    for p in parts:
        if not is_two_edge_connected(g, new_s, p):
            raise StructureViolation(f"{label} left a component that is not 2EC")
    if originals:
        _check_invariant(g, new_s, originals)
    return new_s


@dataclass
class FewTrianglesRun:
    """What :func:`solve_few` did, for reports and tests."""

    initial_cost: Fraction = Fraction(0)
    bridge_steps: int = 0
    glue_steps: int = 0
    labels: list = field(default_factory=list)


def solve_few(g: Graph, h: Iterable[int], log: Optional[list] = None,
              run: Optional[FewTrianglesRun] = None) -> tuple[frozenset[int], int]:
    """Cover bridges, then glue components; return the solution and ``|h|``."""
    h = frozenset(h)
    run = run if run is not None else FewTrianglesRun()
    steps: list = []
    start = initial_cost_check(g, h, "F")
    run.initial_cost = start.cost
    originals = frozenset(c.nodes for c in decompose(g, h).two_ec_components
                          if c.size_class in CYCLES)
    s = h
    while decompose(g, s).non_2ec:
        s = bridge_cover_step(g, s, steps)
        run.bridge_steps += 1
    while len(components(g, s)) > 1:
        s = gluing_step(g, s, steps, originals)
        run.glue_steps += 1
    if not is_two_edge_connected(g, s):
        raise StructureViolation("final solution is not 2EC")
    _, final = measure(g, s, "F")
    if not len(s) <= final.cost <= start.cost:
        raise AssertionError("cost chain |S| <= cost(S) <= cost(H) broken")
    run.labels = [label for label, _ in steps]
    if log is not None:
        log.extend(steps)
    return s, len(h)
