"""Graph generators shared by the tests.

The families plant disjoint cycles and wire them together, so that their
minimum 2-edge-covers have many components.  Most of them pass the
structural checks and so reach the two regime solvers directly.
"""

import random

from twoecss.graph_core import Graph
from twoecss.instances import random_2ec


def _cycles(sizes):
    edges, comps, n = set(), [], 0
    for s in sizes:
        nodes = list(range(n, n + s))
        comps.append(nodes)
        for i in range(s):
            a, b = nodes[i], nodes[(i + 1) % s]
            edges.add((min(a, b), max(a, b)))
        n += s
    return edges, comps, n


def planted(seed, sizes=None, deg=(1, 2), pool=(3, 4, 5, 6, 7, 9)):
    """Disjoint cycles plus random cross edges at every node."""
    rng = random.Random(seed)
    sizes = sizes or [rng.choice(pool) for _ in range(rng.randint(3, 7))]
    edges, comps, n = _cycles(sizes)
    owner = [ci for ci, c in enumerate(comps) for _ in c]
    for v in range(n):
        for _ in range(rng.randint(*deg)):
            w = rng.randrange(n)
            if owner[w] != owner[v]:
                edges.add((min(v, w), max(v, w)))
    return Graph(n, sorted(edges))


def dense(seed, tree=False):
    """Cycles joined by triples of edges along a ring (or a random tree)."""
    rng = random.Random(seed)
    k = rng.randint(3, 7)
    edges, comps, n = _cycles([rng.choice([3, 3, 4, 4, 5, 5, 6, 6, 7, 8, 9]) for _ in range(k)])

    def link(a, b):
        for x, y in zip(rng.sample(a, min(3, len(a))), rng.sample(b, min(3, len(b)))):
            edges.add((min(x, y), max(x, y)))

    if tree:
        for i in range(1, k):
            link(comps[i], comps[rng.randrange(i)])
    else:
        for i in range(k):
            link(comps[i], comps[(i + 1) % k])
    for _ in range(rng.randint(0, k)):
        i, j = rng.sample(range(k), 2)
        a, b = rng.choice(comps[i]), rng.choice(comps[j])
        edges.add((min(a, b), max(a, b)))
    return Graph(n, sorted(edges))


def planted_with_cover(seed, deg=(0, 1), pool=(4, 5, 6)):
    """A planted graph together with the edge set of its planted cycles."""
    rng = random.Random(seed)
    sizes = [rng.choice(pool) for _ in range(rng.randint(3, 8))]
    edges, comps, n = _cycles(sizes)
    cyc = sorted(edges)
    owner = [ci for ci, c in enumerate(comps) for _ in c]
    for v in range(n):
        for _ in range(rng.choice(deg)):
            w = rng.randrange(n)
            if owner[w] != owner[v]:
                edges.add((min(v, w), max(v, w)))
    g = Graph(n, sorted(edges))
    return g, frozenset(g.edge_between(a, b) for a, b in cyc)


def spine_with_blocks(seed):
    """A path of lonely nodes with cycle blocks at both ends, plus covering edges."""
    rng = random.Random(seed)
    edges, sol = set(), []

    def add(a, b, chosen=False):
        if a != b:
            key = (min(a, b), max(a, b))
            edges.add(key)
            if chosen:
                sol.append(key)

    length = rng.randint(3, 8)
    n = length
    for i in range(length - 1):
        add(i, i + 1, True)
    blocks = []

    def block(at):
        nonlocal n
        size = rng.choice((6, 7, 8))
        nodes = list(range(n, n + size))
        n += size
        for i in range(size):
            add(nodes[i], nodes[(i + 1) % size], True)
        add(at, nodes[0], True)
        blocks.append((at, nodes))

    block(0)
    block(length - 1)
    for _ in range(rng.randint(0, 3)):
        block(rng.randrange(1, length - 1))
    for _ in range(rng.randint(2, 2 * length)):
        i = rng.randrange(length)
        add(i, min(length - 1, i + rng.randint(2, 3)))
    for at, nodes in blocks:
        for _ in range(rng.randint(1, 3)):
            add(rng.choice(nodes), max(0, min(length - 1, at + rng.randint(-3, 3))))
    g = Graph(n, sorted(edges))
    return g, frozenset(g.edge_between(a, b) for a, b in sol)


def small_corpus(count=500, seed0=0):
    """Random 2EC graphs with 6..12 nodes, deterministic per index."""
    out = []
    for s in range(seed0, seed0 + count):
        rng = random.Random(s)
        n = rng.randint(6, 12)
        out.append((f"random_2ec-{s}", random_2ec(n, rng.randint(0, n), seed=s)))
    return out
