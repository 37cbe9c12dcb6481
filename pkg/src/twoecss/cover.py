"""Minimum 2-edge-covers and their canonical form.

A canonical cover has (i) 2EC components that are 3- to 6-cycles or have at
least 7 edges, (ii) leaf blocks with at least 6 edges and inner blocks with
at least 4, and (iii) no swap of up to three edges that keeps the size and
lowers the number of connected components.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import NotACover, StructureViolation, UncoverableNode
from .graph_core import (CoverDecomposition, Graph, bridges_and_blocks, components,
                         decompose, degrees)
from .matching_engine import max_simple_2_matching


@dataclass(frozen=True)
class CoverStats:
    t: Fraction  # share of cover edges in triangle components
    b: Fraction  # share of cover edges that are bridges
    size: int


@dataclass
class CanonicalReport:
    prop_i_ok: bool
    prop_ii_ok: bool
    prop_iii_ok: bool
    violations: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    @property
    def canonical(self) -> bool:
        return self.prop_i_ok and self.prop_ii_ok and self.prop_iii_ok


def is_two_edge_cover(g: Graph, h: Iterable[int]) -> bool:
    deg = degrees(g, h)
    return all(d >= 2 for d in deg)


def removable_edges(g: Graph, h: Iterable[int]) -> list[int]:
    """Edges whose removal leaves a 2-edge-cover, by id."""
    h = sorted(h)
    deg = degrees(g, h)
    return [e for e in h if deg[g.ends(e)[0]] >= 3 and deg[g.ends(e)[1]] >= 3]


def _drop_removable(g: Graph, h: set[int]) -> None:
    deg = degrees(g, h)
    for e in sorted(h):
        u, v = g.ends(e)
        if deg[u] >= 3 and deg[v] >= 3:
            h.discard(e)
            deg[u] -= 1
            deg[v] -= 1


def min_two_edge_cover(g: Graph) -> frozenset[int]:
    """Minimum-size 2-edge-cover, grown from a maximum simple 2-matching."""
    low = [v for v in range(g.n) if g.degree(v) < 2]
    if low:
        raise UncoverableNode(f"nodes {low[:5]} have degree below two")
    h = set(max_simple_2_matching(g))
    deg = degrees(g, h)
    # first use edges that fix two deficient nodes at once
    for e, u, v in g.edges():
        if e not in h and deg[u] < 2 and deg[v] < 2:
            h.add(e)
            deg[u] += 1
            deg[v] += 1
    for v in range(g.n):
        for e in g.incident(v):
            if deg[v] >= 2:
                break
            if e not in h:
                h.add(e)
                a, b = g.ends(e)
                deg[a] += 1
                deg[b] += 1
    _drop_removable(g, h)
    return frozenset(h)


def cover_stats(d: CoverDecomposition) -> CoverStats:
    size = d.size
    if size == 0:
        return CoverStats(Fraction(0), Fraction(0), 0)
    tri = sum(len(c.edges) for c in d.two_ec_components if c.size_class == "triangle")
    return CoverStats(Fraction(tri, size), Fraction(len(d.bridges), size), size)


# ---------------------------------------------------------------------------
# swaps of up to three edges


def _component_index(g: Graph, h: Iterable[int]) -> tuple[list[int], int]:
    comps = components(g, h)
    idx = [0] * g.n
    for i, c in enumerate(comps):
        for x in c:
            idx[x] = i
    return idx, len(comps)


def _count_components(n: int, edges: Iterable[tuple[int, int]]) -> int:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n
    for u, v in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[a] = b
            count -= 1
    return count


def find_component_swap(g: Graph, h: Iterable[int], max_size: int = 3
                        ) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """First ``(removed, added)`` swap of equal size at most ``max_size`` that
    keeps a 2-edge-cover and lowers the component count, else ``None``.

    Sizes are tried in increasing order; within a size, added sets are
    enumerated in id order and, for each, removed sets in id order.  Added
    sets must contain an edge between distinct components (otherwise the
    count cannot drop), and removed edges must keep both endpoints covered
    twice after the addition.
    """
    hs = set(h)
    hl = sorted(hs)
    comp, n_comp = _component_index(g, hl)
    deg = degrees(g, hl)
    out_edges = [e for e in g.edge_ids() if e not in hs]
    ends = {e: g.ends(e) for e in g.edge_ids()}
    base_pairs = [ends[e] for e in hl]
    for k in range(1, max_size + 1):
        for added in itertools.combinations(out_edges, k):
            if all(comp[ends[a][0]] == comp[ends[a][1]] for a in added):
                continue
            extra: dict[int, int] = {}
            for a in added:
                for x in ends[a]:
                    extra[x] = extra.get(x, 0) + 1
            cand = []
            for e in hl:
                u, v = ends[e]
                if deg[u] + extra.get(u, 0) >= 3 and deg[v] + extra.get(v, 0) >= 3:
                    cand.append(e)
            if len(cand) < k:
                continue
            for removed in itertools.combinations(cand, k):
                loss: dict[int, int] = {}
                for r in removed:
                    for x in ends[r]:
                        loss[x] = loss.get(x, 0) + 1
                if any(deg[x] + extra.get(x, 0) - c < 2 for x, c in loss.items()):
                    continue
                rs = set(removed)
                pairs = [p for e, p in zip(hl, base_pairs) if e not in rs]
                pairs.extend(ends[a] for a in added)
                if _count_components(g.n, pairs) < n_comp:
                    return tuple(removed), tuple(added)
    return None


# ---------------------------------------------------------------------------
# checker


def check_canonical(g: Graph, h: Iterable[int]) -> CanonicalReport:
    h = frozenset(h)
    d = bridges_and_blocks(g, h)
    rep = CanonicalReport(True, True, True)
    for c in d.two_ec_components:
        if c.size_class == "other":
            rep.prop_i_ok = False
            rep.violations.append(("i", tuple(sorted(c.edges))))
    for b in d.blocks:
        need = 6 if b.leaf else 4
        if len(b.edges) < need:
            rep.prop_ii_ok = False
            rep.violations.append(("ii", tuple(sorted(b.edges))))
    swap = find_component_swap(g, h)
    if swap is not None:
        rep.prop_iii_ok = False
        rep.violations.append(("iii", swap[0] + swap[1]))
    return rep


# ---------------------------------------------------------------------------
# canonicalization


def potential(g: Graph, h: Iterable[int]) -> tuple[int, int, int]:
    d = decompose(g, h)
    return (d.size, d.n_components, len(d.bridges))


def _cycle_order(g: Graph, edges: Iterable[int], start: int) -> list[int]:
    """Vertices of a cycle given by ``edges``, from ``start`` towards its smaller neighbour."""
    adj: dict[int, list[int]] = {}
    for e in edges:
        u, v = g.ends(e)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(len(x) != 2 for x in adj.values()):
        raise StructureViolation("expected a cycle")
    order = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(order) != len(adj):
        raise StructureViolation("expected a single cycle")
    return order


def _e(g: Graph, u: int, v: int) -> int:
    e = g.edge_between(u, v)
    if e is None:
        raise StructureViolation(f"missing edge {u}-{v}")
    return e


def _fix_small_component(g: Graph, h: set[int], nodes: frozenset[int], edges: frozenset[int]
                         ) -> Optional[str]:
    """Bowtie or K_{2,3} rewrite on a 5-node component; returns the step label."""
    deg = {v: 0 for v in nodes}
    for e in edges:
        u, v = g.ends(e)
        deg[u] += 1
        deg[v] += 1
    degs = sorted(deg.values())
    if degs == [2, 2, 2, 2, 4]:
        u = next(v for v in sorted(nodes) if deg[v] == 4)
        others = sorted(nodes - {u})
        inner: dict[int, int] = {}
        for e in edges:
            a, b = g.ends(e)
            if u not in (a, b):
                inner[a] = b
                inner[b] = a
        t1 = sorted((others[0], inner[others[0]]))
        t2 = sorted(x for x in others if x not in t1)
        for a in t1:
            for b in t2:
                f = g.edge_between(a, b)
                if f is not None and f not in h:
                    v1, v2 = a, next(x for x in t1 if x != a)
                    v3, v4 = b, next(x for x in t2 if x != b)
                    cyc = [v1, v3, v4, u, v2, v1]
                    h.difference_update(edges)
                    h.update(_e(g, x, y) for x, y in zip(cyc, cyc[1:]))
                    return "bowtie"
        raise StructureViolation(f"bowtie at {sorted(nodes)} has no chord between its triangles")
    if degs == [2, 2, 2, 3, 3]:
        vs = sorted(v for v in nodes if deg[v] == 3)
        ws = sorted(v for v in nodes if deg[v] == 2)
        for a, b in itertools.combinations(ws, 2):
            f = g.edge_between(a, b)
            if f is not None:
                w1, w2 = a, b
                w3 = next(x for x in ws if x not in (a, b))
                v1, v2 = vs
                cyc = [w1, w2, v1, w3, v2, w1]
                h.difference_update(edges)
                h.update(_e(g, x, y) for x, y in zip(cyc, cyc[1:]))
                return "k23"
        if all(g.degree(w) == 2 for w in ws):
            raise StructureViolation(f"K23 at {sorted(nodes)} is contractible")
        raise StructureViolation(f"K23 at {sorted(nodes)} admits a component-reducing swap")
    raise StructureViolation(f"5-node component {sorted(nodes)} is neither bowtie nor K23")


def _fix_small_block(g: Graph, h: set[int], d: CoverDecomposition) -> Optional[str]:
    for b in d.blocks:
        if len(b.edges) > 5:
            continue
        owner = d.non_2ec[b.owner]
        attach = set()
        for e in owner.bridges:
            u, v = g.ends(e)
            if u in b.nodes:
                attach.add(u)
            if v in b.nodes:
                attach.add(v)
        if len(attach) != 1:
            continue
        v1 = next(iter(attach))
        if len(b.edges) != len(b.nodes):
            raise StructureViolation(f"small block {sorted(b.nodes)} is not a cycle")
        cyc = _cycle_order(g, b.edges, v1)
        ell = len(cyc)
        # (a) a cycle neighbour of v1 with an edge leaving the block
        for z in (cyc[1], cyc[-1]):
            for e in sorted(g.incident(z)):
                w = g.other(e, z)
                if w not in b.nodes:
                    h.discard(_e(g, v1, z))
                    h.add(e)
                    return "block_a"
        if ell != 5:
            raise StructureViolation(f"block {sorted(b.nodes)} of length {ell} lacks an exit")
        v2, v3, v4, v5 = cyc[1], cyc[2], cyc[3], cyc[4]
        chord = g.edge_between(v2, v5)
        if chord is None:
            raise StructureViolation(f"5-cycle block {sorted(b.nodes)} is contractible")
        for z in (v3, v4):
            for e in sorted(g.incident(z)):
                w = g.other(e, z)
                if w in b.nodes:
                    continue
                if z == v3:
                    h.difference_update({_e(g, v1, v5), _e(g, v2, v3)})
                else:
                    h.difference_update({_e(g, v1, v2), _e(g, v5, v4)})
                h.update({e, chord})
                return "block_b"
        raise StructureViolation(f"block {sorted(b.nodes)} hangs on a cut vertex")
    return None


def canonicalize(g: Graph, h: Iterable[int], log: Optional[list] = None) -> frozenset[int]:
    """Rewrite a 2-edge-cover into canonical form without growing it.

    Rewrites, by priority: drop a removable edge; apply a component-reducing
    swap of up to three edges; fix a bowtie or K_{2,3} component; fix a block
    of at most five edges hanging from a single node.  Each rewrite must
    strictly lower ``(size, components, bridges)`` lexicographically.
    """
    cur = set(h)
    if not is_two_edge_cover(g, cur):
        raise NotACover("canonicalize needs a 2-edge-cover")
    pot = potential(g, cur)
    while True:
        step = None
        rem = removable_edges(g, cur)
        if rem:
            cur.discard(rem[0])
            step = "drop"
        else:
            swap = find_component_swap(g, cur)
            if swap is not None:
                cur.difference_update(swap[0])
                cur.update(swap[1])
                step = "swap"
        d = decompose(g, cur) if step is None else None
        if d is not None:
            for c in d.two_ec_components:
                if c.size_class == "other":
                    if len(c.nodes) != 5:
                        raise StructureViolation(
                            f"component {sorted(c.nodes)} is not minimal after removals")
                    step = _fix_small_component(g, cur, c.nodes, c.edges)
                    break
        if d is not None and step is None:
            step = _fix_small_block(g, cur, d)
        if step is None:
            break
        if not is_two_edge_cover(g, cur):
            raise StructureViolation(f"rewrite {step} broke the 2-edge-cover")
        new_pot = potential(g, cur)
        if not new_pot < pot:
            raise StructureViolation(f"rewrite {step} did not lower the potential {pot} -> {new_pot}")
        if log is not None:
            log.append((step, pot, new_pot))
        pot = new_pot
    rep = check_canonical(g, cur)
    if not rep.canonical:
        raise StructureViolation(f"canonical form not reached: {rep.violations[:3]}")
    return frozenset(cur)
