"""Solver for covers with a large share of triangle components.

The cover loses its bridges, and its 2EC components are then glued
together by merging cycles.  A merging cycle is a set of non-solution edges
that forms one cycle once every component is collapsed to a point, and
that enters each light triangle at two distinct nodes.  Gluing stops once
the solution is one core component plus pairwise non-adjacent triangles.
Two finishes follow:

* basic: hook each triangle to the core with two edges and drop a chord;
* refined: choose the hooks to minimise the number of components
  (matroid intersection), connect what is left inside the core, and fix
  parities with a minimum T-join.

The smaller of the two is returned together with a lower bound on the
optimum.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .credit_ledger import initial_cost_check, measure, monitor_step, triangle_components
from .errors import OddTSize, StructureViolation, ThreeOptimalityBreach
from .graph_core import Graph, components, decompose, is_two_edge_connected
from .matching_engine import WeightedCompleteGraph, min_weight_perfect_matching


# ---------------------------------------------------------------------------
# cycle shapes over a vertex partition


def _where(n: int, partition: Sequence[Iterable[int]]) -> list[int]:
    where = [-1] * n
    for i, part in enumerate(partition):
        for v in part:
            if where[v] != -1:
                raise ValueError(f"vertex {v} lies in two partition sets")
            where[v] = i
    if -1 in where:
        raise ValueError(f"vertex {where.index(-1)} lies in no partition set")
    return where


def _end_in(g: Graph, where: Sequence[int], e: int, part: int) -> int:
    u, v = g.ends(e)
    if where[u] == part:
        return u
    if where[v] == part:
        return v
    raise AssertionError(f"edge {e} does not touch set {part}")


def _orient_cycle(g: Graph, where: Sequence[int], edges: Sequence[int]
                  ) -> Optional[list[tuple[int, int, int]]]:
    """Order ``edges`` as a cycle of sets: triples ``(edge, tail, head)``.

    Consecutive triples satisfy ``where[head] == where[next tail]``.  Returns
    ``None`` when the edges do not collapse to exactly one cycle.
    """
    edges = list(edges)
    if len(edges) < 2 or len(set(edges)) != len(edges):
        return None
    at: dict[int, list[int]] = {}
    for e in edges:
        u, v = g.ends(e)
        if where[u] == where[v]:
            return None
        at.setdefault(where[u], []).append(e)
        at.setdefault(where[v], []).append(e)
    if any(len(x) != 2 for x in at.values()):
        return None
    first = min(edges)
    u, v = g.ends(first)
    out = [(first, u, v)]
    used = {first}
    while True:
        part = where[out[-1][2]]
        a, b = at[part]
        nxt = b if a == out[-1][0] else a
        if nxt in used:
            break
        x = _end_in(g, where, nxt, part)
        out.append((nxt, x, g.other(nxt, x)))
        used.add(nxt)
    if len(out) != len(edges) or where[out[-1][2]] != where[out[0][1]]:
        return None
    return out


def _cycle_ok(g: Graph, where: Sequence[int], edges: Sequence[int], strict) -> bool:
    """One collapsed cycle, entering every ``strict`` set at two distinct nodes."""
    ring = _orient_cycle(g, where, edges)
    if ring is None:
        return False
    for i, (_, x, _) in enumerate(ring):
        head = ring[i - 1][2]
        if strict(where[x]) and head == x:
            return False
    return True


def is_nice_cycle(g: Graph, partition: Sequence[Iterable[int]], edges: Sequence[int]) -> bool:
    """Both conditions of a nice cycle of ``partition``."""
    parts = [list(p) for p in partition]
    where = _where(g.n, parts)
    sizes = [len(p) for p in parts]
    return _cycle_ok(g, where, edges, lambda i: sizes[i] > 1)


@dataclass(frozen=True)
class NiceCycle:
    edges: tuple[int, ...]                 # in cyclic order
    partition_sets_touched: tuple[int, ...]
    oriented: tuple[tuple[int, int, int], ...]


class _Almost:
    """Sets ``U_0..U_r`` with, per ``U_i``, two paths from ``u0`` landing at distinct nodes."""

    def __init__(self, u0: int, base: int) -> None:
        self.u0 = u0
        self.base = base
        self.items: dict[int, tuple[list[int], list[int]]] = {}

    def sets(self) -> set[int]:
        return {self.base, *self.items}


def _leaving(g: Graph, where: Sequence[int], members: Sequence[int]) -> list[int]:
    out = set()
    for x in members:
        for e in g.incident(x):
            if where[g.other(e, x)] != where[x]:
                out.add(e)
    return sorted(out)


def _base_pair(g: Graph, where: Sequence[int], members: list[list[int]]) -> list[int]:
    a, b = members
    cross = _leaving(g, where, a)
    if len(a) > 1 and len(b) > 1:
        for e, f in itertools.combinations(cross, 2):
            if not set(g.ends(e)) & set(g.ends(f)):
                return [e, f]
        raise StructureViolation("no 2-matching between the two sides")
    if len(cross) < 2:
        raise StructureViolation("a partition set has a single crossing edge")
    return cross[:2]


def _pick(g: Graph, where: Sequence[int], paths: tuple[list[int], list[int]], part: int,
          size: int, avoid: int) -> list[int]:
    """The stored path into ``part`` whose landing node differs from ``avoid``."""
    for p in paths:
        if size == 1 or _end_in(g, where, p[-1], part) != avoid:
            return p
    raise StructureViolation("both stored paths land on the same node")


def _find_nice(g: Graph, where: list[int], n_sets: int) -> list[int]:
    members: list[list[int]] = [[] for _ in range(n_sets)]
    for v, i in enumerate(where):
        members[i].append(v)
    if n_sets < 2:
        raise StructureViolation("a nice cycle needs at least two sets")
    if n_sets == 2:
        return _base_pair(g, where, members)
    size = [len(m) for m in members]
    out_edges = [_leaving(g, where, m) for m in members]

    # grow a walk of distinct sets until it closes on itself
    seq_sets = [0]
    seq_edges: list[int] = []
    pos = {0: 0}
    entry: Optional[int] = None
    while True:
        cur = seq_sets[-1]
        step = None
        for e in out_edges[cur]:
            v = _end_in(g, where, e, cur)
            if seq_edges and e == seq_edges[-1]:
                continue
            if entry is not None and size[cur] > 1 and v == entry:
                continue
            step = (e, v, g.other(e, v))
            break
        if step is None:
            raise StructureViolation("walk stuck: the graph is not 2-vertex-connected")
        e, v, u = step
        target = where[u]
        if target not in pos:
            pos[target] = len(seq_sets)
            seq_sets.append(target)
            seq_edges.append(e)
            entry = u
            continue
        j = pos[target]
        first = seq_edges[j]
        if size[target] == 1 or u != _end_in(g, where, first, target):
            return seq_edges[j:] + [e]
        almost = _Almost(u, target)
        k = len(seq_edges)
        for i in range(1, k - j + 1):
            forward = seq_edges[j:j + i]
            backward = [e] + seq_edges[j + i:k][::-1]
            almost.items[seq_sets[j + i]] = (forward, backward)
        break

    while True:
        in_a = almost.sets()
        remap: dict[int, int] = {}
        for i in range(n_sets):
            if i not in in_a:
                remap[i] = len(remap) + 1
        where2 = [0 if where[v] in in_a else remap[where[v]] for v in range(g.n)]
        u0 = almost.u0
        if not remap:
            # every set is in A: leave U_0 away from u0
            for x in members[almost.base]:
                if x == u0:
                    continue
                for e in g.incident(x):
                    w = g.other(e, x)
                    if where[w] in almost.items:
                        p = _pick(g, where, almost.items[where[w]], where[w], size[where[w]], w)
                        return p + [e]
            raise StructureViolation("u0 separates U_0 from the other sets")
        inner = _find_nice(g, where2, len(remap) + 1)
        ring = _orient_cycle(g, where2, inner)
        if ring is None:
            raise StructureViolation("recursive nice cycle is malformed")
        touch = [x for _, a, b in ring for x in (a, b) if where2[x] == 0]
        if not touch or where[touch[0]] == where[touch[1]]:
            return inner
        lone = [x for x in touch if where[x] == almost.base and x != u0]
        if lone:
            w = touch[1] if touch[0] == lone[0] else touch[0]
            part = where[w]
            p = _pick(g, where, almost.items[part], part, size[part], w)
            return p + inner
        # extend A by every set the recursive cycle passes through
        start = next(i for i, (_, a, _) in enumerate(ring) if where2[a] == 0)
        ring = ring[start:] + ring[:start]
        length = len(ring)

        def lead_in(node: int) -> list[int]:
            part = where[node]
            if part == almost.base:
                return []
            return list(_pick(g, where, almost.items[part], part, size[part], node))

        a_node = ring[0][1]
        b_node = ring[-1][2]
        for t in range(1, length):
            part = where[ring[t - 1][2]]
            fwd = lead_in(a_node) + [x[0] for x in ring[:t]]
            bwd = lead_in(b_node) + [x[0] for x in ring[t:]][::-1]
            almost.items[part] = (fwd, fwd) if size[part] == 1 else (fwd, bwd)


def nice_cycle(g: Graph, partition: Sequence[Iterable[int]]) -> NiceCycle:
    """A nice cycle of ``partition`` in a simple 2-vertex-connected graph."""
    parts = [sorted(p) for p in partition]
    where = _where(g.n, parts)
    edges = _find_nice(g, where, len(parts))
    ring = _orient_cycle(g, where, edges)
    sizes = [len(p) for p in parts]
    if ring is None or not _cycle_ok(g, where, edges, lambda i: sizes[i] > 1):
        raise StructureViolation(f"constructed edge set {sorted(edges)} is not a nice cycle")
    return NiceCycle(tuple(x[0] for x in ring), tuple(where[x[1]] for x in ring), tuple(ring))


# ---------------------------------------------------------------------------
# merging cycles and the auxiliary forest


class _Components:
    """Snapshot of the components of ``s``, all of them 2EC."""

    def __init__(self, g: Graph, s: frozenset[int], light_flags: frozenset) -> None:
        self.s = s
        self.nodes = [frozenset(c) for c in components(g, s)]
        self.where = [0] * g.n
        for i, c in enumerate(self.nodes):
            for x in c:
                self.where[x] = i
        self.light = [c in light_flags for c in self.nodes]

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class MergingCycle:
    edges: tuple[int, ...]
    incident_components: tuple[int, ...]
    n_light: int
    n_heavy: int
    light_entries: tuple[tuple[int, int], ...]   # per light component, the two nodes hit

    @property
    def gain(self) -> Fraction:
        """Cost decrease of applying the cycle."""
        return self.n_heavy + Fraction(self.n_light, 2) - 2

    @property
    def cheap(self) -> bool:
        return self.gain >= 0


def merging_cycle(g: Graph, comps: _Components, edges: Iterable[int]) -> MergingCycle:
    edges = list(edges)
    if set(edges) & comps.s:
        raise StructureViolation("a merging cycle may only use edges outside the solution")
    ring = _orient_cycle(g, comps.where, edges)
    if ring is None or not _cycle_ok(g, comps.where, edges, lambda i: comps.light[i]):
        raise StructureViolation(f"edges {sorted(edges)} do not form a merging cycle")
    touched = [comps.where[x[1]] for x in ring]
    entries = []
    for i, (_, x, _) in enumerate(ring):
        if comps.light[comps.where[x]]:
            entries.append(tuple(sorted((ring[i - 1][2], x))))
    n_light = sum(1 for c in touched if comps.light[c])
    return MergingCycle(tuple(x[0] for x in ring), tuple(touched), n_light,
                        len(touched) - n_light, tuple(entries))


@dataclass
class AuxForest:
    """Forest on components; each edge joins a light and a heavy component."""

    size: int
    witness: dict[tuple[int, int], tuple[int, int]] = field(default_factory=dict)

    def add(self, light: int, heavy: int, pair: Sequence[int]) -> None:
        if self.connected(light, heavy):
            raise StructureViolation("auxiliary forest edge would close a cycle")
        self.witness[(min(light, heavy), max(light, heavy))] = (min(pair), max(pair))

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.witness

    def _adj(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.size)]
        for a, b in sorted(self.witness):
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def trees(self) -> list[list[int]]:
        adj = self._adj()
        seen = [False] * self.size
        out = []
        for s in range(self.size):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        queue.append(y)
            out.append(sorted(comp))
        return out

    def connected(self, a: int, b: int) -> bool:
        return any(a in t and b in t for t in self.trees())

    def path(self, a: int, b: int) -> list[int]:
        adj = self._adj()
        prev = {a: -1}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        if b not in prev:
            raise StructureViolation("components lie in different trees")
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out[::-1]

    def degree(self, c: int) -> int:
        return sum(1 for key in self.witness if c in key)

    def neighbours(self, c: int) -> list[int]:
        return self._adj()[c]


def _thread(g: Graph, comps: _Components, aux: AuxForest, path: Sequence[int],
            start: int, stop: int) -> list[int]:
    """Witness edges along a forest path, entering light components at fresh nodes.

    ``start`` is the node of ``path[0]`` already used by the cycle, ``stop``
    the node of ``path[-1]`` the cycle will use next.
    """
    out = []
    prev = start
    last = len(path) - 2
    for i in range(len(path) - 1):
        ci, cj = path[i], path[i + 1]
        pair = aux.witness[(min(ci, cj), max(ci, cj))]
        chosen = None
        for e in pair:
            x = _end_in(g, comps.where, e, ci)
            y = _end_in(g, comps.where, e, cj)
            if comps.light[ci] and x == prev:
                continue
            if i == last and comps.light[cj] and y == stop:
                continue
            chosen = (e, y)
            break
        if chosen is None:
            raise StructureViolation("witness edges cannot be threaded through a light component")
        out.append(chosen[0])
        prev = chosen[1]
    return out


def find_merging_cycle(g: Graph, comps: _Components, aux: AuxForest) -> MergingCycle:
    """A merging cycle touching at least two trees of ``aux``."""
    trees = aux.trees()
    if len(trees) < 2:
        raise ValueError("the auxiliary forest is a single tree")
    partition = [sorted(set().union(*(comps.nodes[c] for c in t))) for t in trees]
    nc = nice_cycle(g, partition)
    edges = list(nc.edges)
    ring = nc.oriented
    for i, (_, tail, _) in enumerate(ring):
        head = ring[i - 1][2]
        c_in, c_out = comps.where[head], comps.where[tail]
        if c_in != c_out:
            edges += _thread(g, comps, aux, aux.path(c_in, c_out), head, tail)
    return merging_cycle(g, comps, edges)


def apply_merging_cycle(g: Graph, comps: _Components, mc: MergingCycle) -> frozenset[int]:
    """Add the cycle and drop, in each light triangle, the edge between its two entry nodes."""
    s = set(comps.s) | set(mc.edges)
    for u, v in mc.light_entries:
        chord = [e for e in g.edges_between(u, v) if e in comps.s]
        if not chord:
            raise StructureViolation(f"light component lacks edge {u}-{v}")
        s.discard(chord[0])
    return frozenset(s)


def _three_merge(g: Graph, comps: _Components, aux: AuxForest) -> frozenset[int]:
    """Merge a light triangle with two forest neighbours using four cross edges."""
    for c in range(len(comps)):
        if not comps.light[c] or aux.degree(c) < 2:
            continue
        tri = sorted(comps.nodes[c])
        nbrs = aux.neighbours(c)
        for c1, c2 in itertools.permutations(nbrs, 2):
            for v1, v2, v3 in itertools.permutations(tri):
                need = [(c1, v1), (c1, v2), (c2, v2), (c2, v3)]
                picks = []
                for comp, v in need:
                    cand = [e for e in g.incident(v) if comps.where[g.other(e, v)] == comp]
                    if not cand:
                        break
                    picks.append(min(cand))
                else:
                    drop = {e for e in comps.s
                            if set(g.ends(e)) in ({v1, v2}, {v2, v3})}
                    return frozenset((set(comps.s) - drop) | set(picks))
    raise StructureViolation("no light component admits the three-component merge")


def gluing_step(g: Graph, s: Iterable[int], light_flags: frozenset,
                log: Optional[list] = None) -> frozenset[int]:
    """One cost-monitored step that lowers the number of components."""
    s = frozenset(s)
    comps = _Components(g, s, light_flags)
    aux = AuxForest(len(comps))
    label = None
    new_s = None
    while len(aux.trees()) >= 2:
        mc = find_merging_cycle(g, comps, aux)
        if mc.n_heavy == 0 and mc.n_light <= 3:
            raise ThreeOptimalityBreach(
                f"{mc.n_light} light triangles can be merged by a swap of {mc.n_light} edges")
        if mc.cheap:
            new_s, label = apply_merging_cycle(g, comps, mc), "merging-cycle"
            break
        light = next(c for c in mc.incident_components if comps.light[c])
        heavy = next(c for c in mc.incident_components if not comps.light[c])
        aux.add(light, heavy, mc.edges)
    if new_s is None:
        e0 = None
        for e in g.edge_ids():
            a, b = (comps.where[x] for x in g.ends(e))
            if a != b and not aux.adjacent(a, b):
                e0 = e
                break
        if e0 is not None:
            u, v = g.ends(e0)
            path = aux.path(comps.where[u], comps.where[v])
            edges = [e0] + _thread(g, comps, aux, path, u, v)
            mc = merging_cycle(g, comps, edges)
            if not mc.cheap:
                raise StructureViolation("non-tree edge produced an expensive merging cycle")
            new_s, label = apply_merging_cycle(g, comps, mc), "non-tree-edge-cycle"
        else:
            new_s, label = _three_merge(g, comps, aux), "three-component-merge"
    _, before = measure(g, s, "M", light_flags)
    _, after = measure(g, new_s, "M", light_flags)
    monitor_step(before, after, label, log)
    parts = components(g, new_s)
    if len(parts) >= len(comps):
        raise StructureViolation(f"{label} did not reduce the component count")
    for p in parts:
        if len(p) > 1 and not is_two_edge_connected(g, new_s, p):
            raise StructureViolation(f"{label} left a component that is not 2EC")
    return new_s


def strip_bridges(g: Graph, h: Iterable[int]) -> tuple[frozenset[int], frozenset]:
    """Drop the bridges of ``h``; light flags are the triangle components of ``h``."""
    h = frozenset(h)
    d = decompose(g, h)
    return h - d.bridges, triangle_components(d)


# ---------------------------------------------------------------------------
# core-triangle covers and their finishes


@dataclass
class CoreTriangleCover:
    core: frozenset[int]
    core_nodes: frozenset[int]
    triangles: list[frozenset[int]]        # node sets
    triangle_edges: list[frozenset[int]]
    alpha_s: Optional[int] = None
    q_star: Optional[frozenset[int]] = None

    @property
    def k(self) -> int:
        return len(self.triangles)

    @property
    def edges(self) -> frozenset[int]:
        return self.core.union(*self.triangle_edges)


def is_core_triangle(g: Graph, s: Iterable[int]) -> Optional[CoreTriangleCover]:
    """Split ``s`` into a core plus mutually non-adjacent triangles, if possible."""
    s = frozenset(s)
    parts = []
    for c in components(g, s):
        cs = set(c)
        ce = frozenset(e for e in s if g.ends(e)[0] in cs)
        parts.append((frozenset(c), ce))
    tri = [p for p in parts if len(p[0]) == 3 and len(p[1]) == 3]
    rest = [p for p in parts if not (len(p[0]) == 3 and len(p[1]) == 3)]
    if len(rest) > 1:
        return None
    candidates = rest if rest else tri
    for core in candidates:
        others = [p for p in tri if p is not core]
        owner = {x: i for i, p in enumerate(others) for x in p[0]}
        ok = True
        for i, p in enumerate(others):
            for x in p[0]:
                if any(owner.get(y, i) != i for y in g.neighbors(x)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return CoreTriangleCover(core[1], core[0], [p[0] for p in others],
                                     [p[1] for p in others])
    return None


@dataclass(frozen=True)
class Attachment:
    """Two triangle-to-core edges at distinct triangle nodes, plus the chord they replace."""

    a: int
    b: int
    e: int
    f: int
    chord: int

    def edges(self, tri_edges: frozenset[int]) -> frozenset[int]:
        return (tri_edges - {self.chord}) | {self.e, self.f}


def attachments(g: Graph, ct: CoreTriangleCover, i: int) -> list[Attachment]:
    """All ways to hook triangle ``i`` to the core, ordered by edge ids."""
    tri = sorted(ct.triangles[i])
    out = []
    for x, y in itertools.combinations(tri, 2):
        chord = next(e for e in ct.triangle_edges[i] if set(g.ends(e)) == {x, y})
        ex = sorted(e for e in g.incident(x) if g.other(e, x) in ct.core_nodes)
        ey = sorted(e for e in g.incident(y) if g.other(e, y) in ct.core_nodes)
        for e in ex:
            for f in ey:
                out.append(Attachment(g.other(e, x), g.other(f, y), e, f, chord))
    out.sort(key=lambda t: (min(t.e, t.f), max(t.e, t.f)))
    return out


def _check_spanning(g: Graph, edges: frozenset[int], what: str) -> None:
    if not is_two_edge_connected(g, edges):
        raise StructureViolation(f"{what} is not a 2EC spanning subgraph")


def finish_basic(g: Graph, ct: CoreTriangleCover) -> frozenset[int]:
    """Core plus, per triangle, two hooks at distinct nodes minus the chord between them."""
    out = set(ct.core)
    for i in range(ct.k):
        opts = attachments(g, ct, i)
        if not opts:
            raise StructureViolation(f"triangle {sorted(ct.triangles[i])} has no two core hooks")
        out |= opts[0].edges(ct.triangle_edges[i])
    out = frozenset(out)
    if len(out) != len(ct.edges) + ct.k:
        raise AssertionError("basic finish size differs from |S| + k")
    _check_spanning(g, out, "basic finish")
    return out


def max_common_independent(n_items: int, indep1, indep2) -> list[int]:
    """Largest set independent in two matroids, by shortest augmenting paths.

    ``indep1`` and ``indep2`` take a list of item indices.
    """
    current: list[int] = []
    while True:
        inside = set(current)
        outside = [y for y in range(n_items) if y not in inside]
        sources = [y for y in outside if indep1(current + [y])]
        sinks = {y for y in outside if indep2(current + [y])}
        arcs: dict[int, list[int]] = {x: [] for x in range(n_items)}
        for x in current:
            rest = [z for z in current if z != x]
            for y in outside:
                if indep1(rest + [y]):
                    arcs[x].append(y)
                if indep2(rest + [y]):
                    arcs[y].append(x)
        prev = {y: -1 for y in sources}
        queue = deque(sources)
        end = None
        while queue:
            z = queue.popleft()
            if z in sinks:
                end = z
                break
            for w in arcs[z]:
                if w not in prev:
                    prev[w] = z
                    queue.append(w)
        if end is None:
            return sorted(current)
        path = []
        while end != -1:
            path.append(end)
            end = prev[end]
        current = sorted(set(current).symmetric_difference(path))


def _forest_ok(pairs: Sequence[tuple[int, int]]) -> bool:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def _count_components(g: Graph, edges: Iterable[int]) -> int:
    return len(components(g, edges))


def minimize_components(g: Graph, ct: CoreTriangleCover) -> tuple[frozenset[int], int]:
    """Hooks for every triangle minimising the number of components they leave.

    Each hook joining two distinct core nodes is a coloured pseudo-edge; a
    largest forest with no repeated colour picks the useful hooks, and the
    other triangles take their first hook.
    """
    options = [attachments(g, ct, i) for i in range(ct.k)]
    ground: list[tuple[int, Attachment]] = []
    for i, opts in enumerate(options):
        if not opts:
            raise StructureViolation(f"triangle {sorted(ct.triangles[i])} has no two core hooks")
        seen = set()
        for t in opts:
            key = (min(t.a, t.b), max(t.a, t.b))
            if t.a != t.b and key not in seen:
                seen.add(key)
                ground.append((i, t))
    chosen = max_common_independent(
        len(ground),
        lambda idx: _forest_ok([(ground[j][1].a, ground[j][1].b) for j in idx]),
        lambda idx: len({ground[j][0] for j in idx}) == len(idx))
    pick = {ground[j][0]: ground[j][1] for j in chosen}
    q = set()
    for i in range(ct.k):
        q |= pick.get(i, options[i][0]).edges(ct.triangle_edges[i])
    q = frozenset(q)
    alpha = len(ct.core_nodes) - len(chosen)
    if _count_components(g, q) != alpha:
        raise AssertionError("component count of the hooks disagrees with the forest size")
    ct.q_star, ct.alpha_s = q, alpha
    return q, alpha


@dataclass(frozen=True)
class TJoinInstance:
    host: frozenset[int]     # edge ids the join may use
    odd_set: frozenset[int]
    join: frozenset[int]


def min_t_join(g: Graph, t: Iterable[int], host: Optional[Iterable[int]] = None,
               bound_edges: Optional[int] = None) -> TJoinInstance:
    """Minimum T-join inside ``host`` via shortest paths and a perfect matching.

    With ``bound_edges`` set, the join is asserted to use at most half of
    that many edges.
    """
    t = sorted(set(t))
    if len(t) % 2:
        raise OddTSize(f"T has odd size {len(t)}")
    host = frozenset(g.edge_ids() if host is None else host)
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in sorted(host):
        u, v = g.ends(e)
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    trees = []
    for s in t:
        prev = {s: (-1, -1)}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, e in adj.get(x, []):
                if y not in prev:
                    prev[y] = (x, e)
                    queue.append(y)
        trees.append(prev)

    def hops(i: int, j: int) -> int:
        node = t[j]
        if node not in trees[i]:
            raise StructureViolation("T-join host is disconnected")
        count = 0
        while node != t[i]:
            node = trees[i][node][0]
            count += 1
        return count

    table = [[hops(i, j) if i != j else 0 for j in range(len(t))] for i in range(len(t))]
    pairs = min_weight_perfect_matching(WeightedCompleteGraph(len(t), lambda i, j: table[i][j]))
    join: set[int] = set()
    for i, j in pairs:
        node = t[j]
        while node != t[i]:
            node, e = trees[i][node]
            join ^= {e}
    deg = Counter()
    for e in join:
        u, v = g.ends(e)
        deg[u] += 1
        deg[v] += 1
    if {v for v, d in deg.items() if d % 2} != set(t):
        raise AssertionError("T-join parity is wrong")
    if bound_edges is not None and 2 * len(join) > bound_edges:
        raise AssertionError(f"T-join of size {len(join)} exceeds half of {bound_edges}")
    return TJoinInstance(host, frozenset(t), frozenset(join))


def _repair_parallel(g: Graph, multi: list[int]) -> frozenset[int]:
    """Make the multiset ``multi`` simple while keeping it 2EC.

    A second copy of ``f`` is swapped for an unused edge across the cut
    that ``f`` would otherwise be alone in; when ``f`` is not alone in any
    cut the copy is simply dropped.
    """
    counts = Counter(multi)
    while True:
        dup = sorted(e for e, c in counts.items() if c > 1)
        if not dup:
            return frozenset(counts)
        f = dup[0]
        counts[f] -= 1
        support = set(counts)
        u, v = g.ends(f)
        side = next(set(c) for c in components(g, support - {f}) if u in c)
        if v in side:
            continue
        repl = None
        for e in g.edge_ids():
            a, b = g.ends(e)
            if e not in support and (a in side) != (b in side):
                repl = e
                break
        if repl is None:
            raise StructureViolation(f"no edge can replace the second copy of edge {f}")
        counts[repl] += 1


def finish_refined(g: Graph, ct: CoreTriangleCover) -> tuple[frozenset[int], int, TJoinInstance]:
    """Best hooks, a connecting forest inside the core, and a parity-fixing T-join.

    Returns ``(edges, alpha, tjoin)`` with ``|edges| <= 4k + alpha - 1 + |J|``.
    """
    q, alpha = minimize_components(g, ct)
    core_nodes = ct.core_nodes
    host = [e for e in g.edge_ids() if all(x in core_nodes for x in g.ends(e))]
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in q:
        a, b = g.ends(e)
        parent[find(a)] = find(b)
    forest = []
    for e in host:
        a, b = (find(x) for x in g.ends(e))
        if a != b:
            parent[a] = b
            forest.append(e)
    if len(forest) != alpha - 1:
        raise StructureViolation("the core cannot connect the hooked components")
    deg = Counter()
    for e in list(q) + forest:
        for x in g.ends(e):
            deg[x] += 1
    odd = {x for x, d in deg.items() if d % 2}
    if not odd <= core_nodes:
        raise AssertionError("an odd-degree node lies outside the core")
    tj = min_t_join(g, odd, host, bound_edges=len(ct.core))
    multi = list(q) + forest + sorted(tj.join)
    out = _repair_parallel(g, multi)
    if len(out) > 4 * ct.k + alpha - 1 + len(tj.join):
        raise AssertionError("refined finish exceeds 4k + alpha - 1 + |J|")
    _check_spanning(g, out, "refined finish")
    return out, alpha, tj


@dataclass
class ManyTrianglesRun:
    """What :func:`solve_many` did, for reports and tests."""

    stripped: frozenset[int] = frozenset()
    glued: Optional[CoreTriangleCover] = None
    basic: frozenset[int] = frozenset()
    refined: frozenset[int] = frozenset()
    alpha: int = 0
    join_size: int = 0
    initial_cost: Fraction = Fraction(0)
    steps: int = 0


def solve_many(g: Graph, h: Iterable[int], log: Optional[list] = None,
               run: Optional[ManyTrianglesRun] = None) -> tuple[frozenset[int], int]:
    """Glue to core-triangle form, finish both ways, return the smaller and a lower bound."""
    h = frozenset(h)
    run = run if run is not None else ManyTrianglesRun()
    start = initial_cost_check(g, h, "M")
    s, flags = strip_bridges(g, h)
    run.stripped, run.initial_cost = s, start.cost
    while True:
        ct = is_core_triangle(g, s)
        if ct is not None:
            break
        s = gluing_step(g, s, flags, log)
        run.steps += 1
    _, final = measure(g, s, "M", flags)
    if not len(s) <= final.cost <= start.cost:
        raise AssertionError("cost chain |S| <= cost(S) <= cost(S0) broken")
    basic = finish_basic(g, ct)
    refined, alpha, tj = finish_refined(g, ct)
    run.glued, run.basic, run.refined = ct, basic, refined
    run.alpha, run.join_size = alpha, len(tj.join)
    best = min((basic, refined), key=lambda x: (len(x), sorted(x)))
    lower = max(len(h), 4 * ct.k + alpha - 1)
    return best, lower
