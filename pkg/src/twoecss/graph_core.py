"""Undirected multigraphs with stable edge ids, and connectivity primitives.

Edge sets are passed around as ``frozenset`` of edge ids of a host graph; the
host travels alongside as a separate argument.  Removing an edge tombstones
its id, so ids stay valid across transformations.  Whenever an algorithm has
a choice it takes the lowest vertex id first, then the lowest edge id.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from . import kernels
from .errors import ComponentsNotTwoEC, NotACover

EdgeSet = frozenset  # frozenset[int] of edge ids


class Graph:
    """Undirected multigraph on vertices ``0..n-1``.

    In ``simple_mode`` self-loops and parallel edges are rejected.
    """

    __slots__ = ("n", "simple_mode", "_ends", "_inc", "_pairs", "_live")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (),
                 simple_mode: bool = True) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.simple_mode = simple_mode
        self._ends: list[Optional[tuple[int, int]]] = []
        self._inc: list[dict[int, None]] = [dict() for _ in range(n)]
        self._pairs: dict[tuple[int, int], list[int]] = {}
        self._live = 0
        for u, v in edges:
            self.add_edge(u, v)

    # construction -------------------------------------------------------
    def add_edge(self, u: int, v: int) -> int:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
        key = (u, v) if u <= v else (v, u)
        if self.simple_mode:
            if u == v:
                raise ValueError(f"self-loop at {u} in a simple graph")
            if self._pairs.get(key):
                raise ValueError(f"parallel edge {key} in a simple graph")
        eid = len(self._ends)
        self._ends.append(key)
        self._inc[u][eid] = None
        self._inc[v][eid] = None
        self._pairs.setdefault(key, []).append(eid)
        self._live += 1
        return eid

    def add_vertex(self) -> int:
        self._inc.append(dict())
        self.n += 1
        return self.n - 1

    def remove_edge(self, eid: int) -> None:
        u, v = self.ends(eid)
        self._ends[eid] = None
        self._inc[u].pop(eid, None)
        self._inc[v].pop(eid, None)
        self._pairs[(u, v)].remove(eid)
        self._live -= 1

    def copy(self) -> "Graph":
        h = Graph.__new__(Graph)
        h.n = self.n
        h.simple_mode = self.simple_mode
        h._ends = list(self._ends)
        h._inc = [dict(d) for d in self._inc]
        h._pairs = {k: list(v) for k, v in self._pairs.items() if v}
        h._live = self._live
        return h

    # queries --------------------------------------------------------------
    @property
    def m(self) -> int:
        return self._live

    @property
    def id_bound(self) -> int:
        """One more than the largest edge id ever issued."""
        return len(self._ends)

    def is_live(self, eid: int) -> bool:
        return 0 <= eid < len(self._ends) and self._ends[eid] is not None

    def ends(self, eid: int) -> tuple[int, int]:
        e = self._ends[eid] if 0 <= eid < len(self._ends) else None
        if e is None:
            raise KeyError(f"edge {eid} is not live")
        return e

    def other(self, eid: int, v: int) -> int:
        a, b = self.ends(eid)
        if v == a:
            return b
        if v == b:
            return a
        raise ValueError(f"vertex {v} is not an endpoint of edge {eid}")

    def edge_ids(self) -> list[int]:
        return [i for i, e in enumerate(self._ends) if e is not None]

    def edges(self) -> list[tuple[int, int, int]]:
        return [(i, e[0], e[1]) for i, e in enumerate(self._ends) if e is not None]

    def incident(self, v: int) -> list[int]:
        return list(self._inc[v])

    def degree(self, v: int) -> int:
        return len(self._inc[v])

    def neighbors(self, v: int) -> list[int]:
        return sorted({self.other(e, v) for e in self._inc[v]})

    def edges_between(self, u: int, v: int) -> list[int]:
        key = (u, v) if u <= v else (v, u)
        return list(self._pairs.get(key, ()))

    def edge_between(self, u: int, v: int) -> Optional[int]:
        key = (u, v) if u <= v else (v, u)
        ids = self._pairs.get(key)
        return ids[0] if ids else None

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_between(u, v) is not None

    def is_simple(self) -> bool:
        return all(len(ids) <= 1 for ids in self._pairs.values()) and all(
            e[0] != e[1] for e in self._ends if e is not None)

    def induced_edges(self, nodes: Iterable[int]) -> list[int]:
        ns = set(nodes)
        out = set()
        for v in ns:
            for e in self._inc[v]:
                a, b = self._ends[e]  # type: ignore[misc]
                if a in ns and b in ns:
                    out.add(e)
        return sorted(out)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, simple_mode={self.simple_mode})"


# ---------------------------------------------------------------------------
# helpers


def _edge_list(g: Graph, eids: Optional[Iterable[int]]) -> list[int]:
    if eids is None:
        return g.edge_ids()
    return sorted(eids)


def adjacency(g: Graph, eids: Optional[Iterable[int]] = None) -> list[list[tuple[int, int]]]:
    """Per-vertex lists of ``(neighbour, edge id)`` restricted to ``eids``."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for e in _edge_list(g, eids):
        u, v = g.ends(e)
        if u == v:
            continue
        adj[u].append((v, e))
        adj[v].append((u, e))
    return adj


def degrees(g: Graph, eids: Iterable[int]) -> list[int]:
    deg = [0] * g.n
    for e in eids:
        u, v = g.ends(e)
        deg[u] += 1
        deg[v] += 1
    return deg


def components(g: Graph, eids: Optional[Iterable[int]] = None,
               nodes: Optional[Iterable[int]] = None) -> list[list[int]]:
    """Connected components of ``(nodes, eids)`` as sorted vertex lists.

    Edges with an endpoint outside ``nodes`` are ignored.  Components are
    ordered by their smallest vertex.
    """
    scope = range(g.n) if nodes is None else sorted(set(nodes))
    inside = None if nodes is None else set(scope)
    adj = adjacency(g, eids)
    seen: set[int] = set()
    out: list[list[int]] = []
    for s in scope:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, _ in adj[x]:
                if y not in seen and (inside is None or y in inside):
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        out.append(sorted(comp))
    return out


def is_connected(g: Graph, eids: Optional[Iterable[int]] = None,
                 nodes: Optional[Iterable[int]] = None) -> bool:
    return len(components(g, eids, nodes)) <= 1


def _compact(g: Graph, eids: list[int], nodes: Optional[Iterable[int]]):
    """Relabel to a dense vertex range for the kernels."""
    if nodes is None:
        n = g.n
        eu = []
        ev = []
        for e in eids:
            u, v = g.ends(e)
            eu.append(u)
            ev.append(v)
        return n, eu, ev, eids
    order = sorted(set(nodes))
    index = {v: i for i, v in enumerate(order)}
    eu = []
    ev = []
    kept = []
    for e in eids:
        u, v = g.ends(e)
        if u in index and v in index:
            eu.append(index[u])
            ev.append(index[v])
            kept.append(e)
    return len(order), eu, ev, kept


def bridges(g: Graph, eids: Optional[Iterable[int]] = None) -> list[int]:
    """Bridges of the subgraph ``(V, eids)``, sorted by edge id."""
    el = _edge_list(g, eids)
    n, eu, ev, kept = _compact(g, el, None)
    idx = kernels.bridges(n, eu, ev, [1] * len(eu))
    return sorted(kept[i] for i in idx)


def is_two_edge_connected(g: Graph, eids: Optional[Iterable[int]] = None,
                          nodes: Optional[Iterable[int]] = None) -> bool:
    """True iff ``eids`` connects ``nodes`` (default: all vertices) bridgelessly.

    Edges leaving ``nodes`` are ignored.
    """
    el = _edge_list(g, eids)
    n, eu, ev, kept = _compact(g, el, nodes)
    return kernels.is_two_edge_connected(n, eu, ev, [1] * len(eu))


def two_ec_pieces(g: Graph, eids: Iterable[int],
                  nodes: Optional[Iterable[int]] = None) -> list[list[int]]:
    """Vertex sets of the maximal 2EC pieces (components after dropping bridges)."""
    el = _edge_list(g, eids)
    br = set(bridges(g, el))
    return components(g, [e for e in el if e not in br], nodes)


def cut_vertices(g: Graph, eids: Optional[Iterable[int]] = None,
                 nodes: Optional[Iterable[int]] = None) -> list[int]:
    """Articulation points of ``(nodes, eids)``, sorted."""
    scope = list(range(g.n)) if nodes is None else sorted(set(nodes))
    inside = set(scope)
    adj = adjacency(g, eids)
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    cuts: set[int] = set()
    clock = 0
    for root in scope:
        if root in disc:
            continue
        disc[root] = low[root] = clock
        clock += 1
        children = 0
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, e in it:
                if e == via or w not in inside:
                    continue
                if w not in disc:
                    disc[w] = low[w] = clock
                    clock += 1
                    if v == root:
                        children += 1
                    stack.append((w, e, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < low[v]:
                    low[v] = disc[w]
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                if low[v] < low[p]:
                    low[p] = low[v]
                if p != root and low[v] >= disc[p]:
                    cuts.add(p)
        if children >= 2:
            cuts.add(root)
    return sorted(cuts)


def is_two_vertex_connected(g: Graph, eids: Optional[Iterable[int]] = None,
                            nodes: Optional[Iterable[int]] = None) -> bool:
    scope = list(range(g.n)) if nodes is None else sorted(set(nodes))
    if len(scope) < 3:
        return False
    if not is_connected(g, eids, scope):
        return False
    return not cut_vertices(g, eids, scope)


# ---------------------------------------------------------------------------
# 2-vertex cuts


@dataclass(frozen=True)
class TwoVertexCut:
    u: int
    v: int
    kind: str  # "isolating" | "non_isolating"
    components: tuple[tuple[int, ...], ...]
    side_partition: Optional[tuple[frozenset[int], frozenset[int]]]


def cut_partition(parts: Sequence[Sequence[int]]) -> tuple[frozenset[int], frozenset[int]]:
    """Split the components left by a non-isolating cut into ``(V1, V2)``.

    Components are sorted by size (ties by smallest vertex).  Two components
    are taken as they are; otherwise the two smallest form one side and the
    rest the other.  The sides are swapped if needed so that ``|V1| <= |V2|``.
    """
    comps = sorted(parts, key=lambda c: (len(c), min(c)))
    if len(comps) == 2:
        a, b = frozenset(comps[0]), frozenset(comps[1])
    else:
        a = frozenset(comps[0]) | frozenset(comps[1])
        b = frozenset(v for c in comps[2:] for v in c)
    if len(a) > len(b) or (len(a) == len(b) and min(a) > min(b)):
        a, b = b, a
    return a, b


def two_vertex_cuts(g: Graph) -> list[TwoVertexCut]:
    """All vertex pairs whose removal disconnects ``g``, lexicographic order."""
    out: list[TwoVertexCut] = []
    n = g.n
    eids = g.edge_ids()
    for u in range(n):
        for v in range(u + 1, n):
            rest = [x for x in range(n) if x != u and x != v]
            if not rest:
                continue
            parts = components(g, eids, rest)
            if len(parts) < 2:
                continue
            isolating = len(parts) == 2 and min(len(p) for p in parts) == 1
            partition = None
            if not isolating and n >= 6:
                partition = cut_partition(parts)
            out.append(TwoVertexCut(u, v, "isolating" if isolating else "non_isolating",
                                    tuple(tuple(p) for p in parts), partition))
    return out


# ---------------------------------------------------------------------------
# contraction and induced subgraphs


@dataclass
class Derived:
    """A graph derived from a parent graph with id translations.

    ``vertex_map[old] -> new`` (``-1`` when the vertex was dropped) and
    ``edge_map[new] -> old`` (``-1`` for edges with no parent, e.g. dummies).
    """

    graph: Graph
    vertex_map: list[int]
    edge_map: list[int]

    def edge_to_new(self) -> dict[int, int]:
        return {old: new for new, old in enumerate(self.edge_map) if old >= 0}

    def lift(self, eids: Iterable[int]) -> set[int]:
        """Translate new edge ids back to parent ids, dropping dummies."""
        return {self.edge_map[e] for e in eids if self.edge_map[e] >= 0}


def contract(g: Graph, w: Iterable[int]) -> Derived:
    """Collapse the vertex set ``w`` into one vertex.

    Loops created by the contraction are dropped, parallel edges are kept.
    Vertices keep their relative order; the merged vertex takes the position
    of the smallest member of ``w``.
    """
    ws = set(w)
    if not ws:
        raise ValueError("cannot contract an empty vertex set")
    vmap = [-1] * g.n
    nxt = 0
    merged = -1
    for x in range(g.n):
        if x in ws:
            if merged < 0:
                merged = nxt
                nxt += 1
            vmap[x] = merged
        else:
            vmap[x] = nxt
            nxt += 1
    h = Graph(nxt, simple_mode=False)
    emap: list[int] = []
    for e, a, b in g.edges():
        x, y = vmap[a], vmap[b]
        if x == y:
            continue
        h.add_edge(x, y)
        emap.append(e)
    return Derived(h, vmap, emap)


def induced(g: Graph, nodes: Iterable[int], simple_mode: Optional[bool] = None) -> Derived:
    """The subgraph induced by ``nodes``, relabelled in increasing order."""
    order = sorted(set(nodes))
    vmap = [-1] * g.n
    for i, x in enumerate(order):
        vmap[x] = i
    h = Graph(len(order), simple_mode=g.simple_mode if simple_mode is None else simple_mode)
    emap: list[int] = []
    for e in g.induced_edges(order):
        a, b = g.ends(e)
        h.add_edge(vmap[a], vmap[b])
        emap.append(e)
    return Derived(h, vmap, emap)


def component_graph(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Simple graph with one node per connected component of ``(V, s)``.

    Returns the graph and the component index of every vertex.  Raises
    :class:`ComponentsNotTwoEC` unless every component is 2EC.
    """
    s = sorted(s)
    comps = components(g, s)
    member = [0] * g.n
    for i, c in enumerate(comps):
        for x in c:
            member[x] = i
    by_comp: list[list[int]] = [[] for _ in comps]
    for e in s:
        by_comp[member[g.ends(e)[0]]].append(e)
    for i, c in enumerate(comps):
        if len(c) > 1 and not is_two_edge_connected(g, by_comp[i], c):
            raise ComponentsNotTwoEC(f"component {i} on {c} is not 2EC")
    cg = Graph(len(comps))
    for _, a, b in g.edges():
        x, y = member[a], member[b]
        if x != y and not cg.has_edge(x, y):
            cg.add_edge(x, y)
    return cg, member


# ---------------------------------------------------------------------------
# boundary matchings


@dataclass(frozen=True)
class BoundaryMatching:
    """Result of :func:`find_3_matching`.

    ``matching`` holds three vertex-disjoint boundary edges when they exist;
    otherwise ``cover`` holds at most two vertices touching every boundary edge.
    """

    matching: Optional[tuple[int, ...]]
    cover: Optional[frozenset[int]]
    size: int


def boundary_edges(g: Graph, v1: Iterable[int], v2: Iterable[int],
                   eids: Optional[Iterable[int]] = None) -> list[int]:
    a, b = set(v1), set(v2)
    out = []
    for e in _edge_list(g, eids):
        x, y = g.ends(e)
        if (x in a and y in b) or (x in b and y in a):
            out.append(e)
    return out


def bipartite_matching(g: Graph, left: Iterable[int], edges: Sequence[int]
                       ) -> tuple[dict[int, int], set[int]]:
    """Maximum matching of the bipartite graph spanned by ``edges``.

    Returns ``mate`` (vertex -> matched edge id, both sides) and a minimum
    vertex cover obtained by the alternating-reachability construction.
    """
    left_set = set(left)
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in sorted(edges):
        x, y = g.ends(e)
        if x not in left_set:
            x, y = y, x
        adj.setdefault(x, []).append((y, e))
    mate: dict[int, int] = {}

    def augment(x: int, seen: set[int]) -> bool:
        for y, e in adj.get(x, ()):
            if y in seen:
                continue
            seen.add(y)
            if y not in mate or augment(g.other(mate[y], y), seen):
                mate[x] = e
                mate[y] = e
                return True
        return False

    for x in sorted(adj):
        if x not in mate:
            augment(x, set())
    # alternating reachability from unmatched left vertices
    reach_l: set[int] = set()
    reach_r: set[int] = set()
    queue = deque(x for x in sorted(adj) if x not in mate)
    reach_l.update(queue)
    while queue:
        x = queue.popleft()
        for y, e in adj.get(x, ()):
            if y in reach_r or mate.get(x) == e:
                continue
            reach_r.add(y)
            if y in mate:
                z = g.other(mate[y], y)
                if z not in reach_l:
                    reach_l.add(z)
                    queue.append(z)
    cover = {x for x in adj if x not in reach_l} | reach_r
    return mate, cover


def find_3_matching(g: Graph, v1: Iterable[int], v2: Iterable[int],
                    eids: Optional[Iterable[int]] = None) -> BoundaryMatching:
    """Three vertex-disjoint edges between ``v1`` and ``v2``, or a small cover.

    The maximum bipartite matching on the boundary edges decides; when it has
    fewer than three edges, the König cover of the same size is returned.
    """
    side1 = sorted(set(v1))
    be = boundary_edges(g, side1, v2, eids)
    mate, cover = bipartite_matching(g, side1, be)
    matched = sorted({mate[x] for x in side1 if x in mate})
    if len(matched) >= 3:
        return BoundaryMatching(tuple(matched[:3]), None, len(matched))
    return BoundaryMatching(None, frozenset(cover), len(matched))


# ---------------------------------------------------------------------------
# cover decomposition


SIZE_CLASSES = ("triangle", "cycle4", "cycle5", "cycle6", "large", "other")


def size_class(n_nodes: int, n_edges: int) -> str:
    """Size class of a 2EC component with the given node and edge counts."""
    if n_edges >= 7:
        return "large"
    if n_edges == n_nodes and 3 <= n_nodes <= 6:
        return ("triangle", "cycle4", "cycle5", "cycle6")[n_nodes - 3]
    return "other"


@dataclass(frozen=True)
class TwoECComponent:
    nodes: frozenset[int]
    edges: frozenset[int]
    size_class: str


@dataclass(frozen=True)
class Block:
    nodes: frozenset[int]
    edges: frozenset[int]
    leaf: bool
    owner: int  # index into CoverDecomposition.non_2ec


@dataclass(frozen=True)
class NonTwoECComponent:
    nodes: frozenset[int]
    edges: frozenset[int]
    blocks: tuple[int, ...]
    bridges: frozenset[int]
    lonely: frozenset[int]


@dataclass
class CoverDecomposition:
    """Connected components of a cover split into 2EC parts, blocks and bridges."""

    two_ec_components: list[TwoECComponent] = field(default_factory=list)
    blocks: list[Block] = field(default_factory=list)
    bridges: frozenset[int] = frozenset()
    lonely_nodes: frozenset[int] = frozenset()
    non_2ec: list[NonTwoECComponent] = field(default_factory=list)

    @property
    def size(self) -> int:
        return (sum(len(c.edges) for c in self.two_ec_components)
                + sum(len(c.edges) for c in self.non_2ec))

    @property
    def n_components(self) -> int:
        return len(self.two_ec_components) + len(self.non_2ec)


def decompose(g: Graph, s: Iterable[int], nodes: Optional[Iterable[int]] = None
              ) -> CoverDecomposition:
    """Decompose an arbitrary edge set (no degree requirement).

    Isolated vertices become single-node 2EC components with no edges.
    """
    el = sorted(s)
    br = set(bridges(g, el))
    comps = components(g, el, nodes)
    member: dict[int, int] = {}
    for i, c in enumerate(comps):
        for x in c:
            member[x] = i
    comp_edges: list[list[int]] = [[] for _ in comps]
    for e in el:
        comp_edges[member[g.ends(e)[0]]].append(e)
    d = CoverDecomposition()
    all_bridges: set[int] = set()
    all_lonely: set[int] = set()
    for i, c in enumerate(comps):
        ce = comp_edges[i]
        cbr = [e for e in ce if e in br]
        if not cbr:
            d.two_ec_components.append(
                TwoECComponent(frozenset(c), frozenset(ce), size_class(len(c), len(ce))))
            continue
        rest = [e for e in ce if e not in br]
        pieces = components(g, rest, c)
        owner = len(d.non_2ec)
        block_ids = []
        lonely = set()
        for p in pieces:
            if len(p) == 1:
                lonely.add(p[0])
                continue
            ps = set(p)
            pe = frozenset(e for e in rest if g.ends(e)[0] in ps)
            touching = sum(1 for e in cbr if g.ends(e)[0] in ps or g.ends(e)[1] in ps)
            block_ids.append(len(d.blocks))
            d.blocks.append(Block(frozenset(p), pe, touching == 1, owner))
        d.non_2ec.append(NonTwoECComponent(frozenset(c), frozenset(ce), tuple(block_ids),
                                           frozenset(cbr), frozenset(lonely)))
        all_bridges.update(cbr)
        all_lonely |= lonely
    d.bridges = frozenset(all_bridges)
    d.lonely_nodes = frozenset(all_lonely)
    return d


def bridges_and_blocks(g: Graph, cover: Iterable[int]) -> CoverDecomposition:
    """Decompose a 2-edge-cover into 2EC components, blocks, bridges, lonely nodes."""
    cover = sorted(cover)
    deg = degrees(g, cover)
    low = [v for v in range(g.n) if deg[v] < 2]
    if low:
        raise NotACover(f"nodes {low[:5]} have degree < 2 in the cover")
    return decompose(g, cover)


def iter_pairs(items: Sequence[int]) -> Iterator[tuple[int, int]]:
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield items[i], items[j]
