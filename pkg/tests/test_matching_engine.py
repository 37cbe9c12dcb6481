import random

import networkx as nx
import pytest

from twoecss.errors import OddVertexCount
from twoecss.graph_core import Graph, degrees
from twoecss.instances import complete, petersen
from twoecss.matching_engine import (
    WeightedCompleteGraph, matching_weight, max_matching, max_simple_2_matching,
    max_weight_matching, min_weight_perfect_matching,
)
from twoecss.oracle import (
    exact_max_2_matching_size, exact_max_matching_size, exact_min_perfect_matching_weight,
)


def random_graph(rng, n, m):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, sorted(rng.sample(pairs, min(m, len(pairs)))))


def is_matching(g, eids):
    return all(d <= 1 for d in degrees(g, eids))


def test_petersen_has_perfect_matching():
    m = max_matching(petersen())
    assert len(m) == 5 and is_matching(petersen(), m)


def test_odd_cycle_needs_blossom():
    g = Graph(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 3)])
    assert len(max_matching(g)) == 3


def test_max_matching_against_exhaustive():
    rng = random.Random(11)
    for _ in range(120):
        n = rng.randint(2, 10)
        g = random_graph(rng, n, rng.randint(0, 16))
        m = max_matching(g)
        assert is_matching(g, m)
        assert len(m) == exact_max_matching_size(g)


def test_weighted_matching_against_networkx():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(2, 12)
        edges = [(u, v, rng.randint(1, 20)) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.5]
        if not edges:
            continue
        mate = max_weight_matching(edges)
        ours = sum(w for u, v, w in edges if mate[u] == v)
        h = nx.Graph()
        h.add_weighted_edges_from(edges)
        ref = nx.max_weight_matching(h)
        assert ours == sum(h[u][v]["weight"] for u, v in ref)


def test_min_weight_perfect_matching_against_exhaustive():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.choice([2, 4, 6, 8])
        table = {(i, j): rng.randint(0, 9) for i in range(n) for j in range(i + 1, n)}

        def weight(i, j):
            return table[(min(i, j), max(i, j))]

        w = WeightedCompleteGraph(n, weight)
        pairs = min_weight_perfect_matching(w)
        assert sorted(x for p in pairs for x in p) == list(range(n))
        assert matching_weight(w, pairs) == exact_min_perfect_matching_weight(n, weight)


def test_perfect_matching_rejects_odd_order():
    with pytest.raises(OddVertexCount):
        min_weight_perfect_matching(WeightedCompleteGraph(3, lambda i, j: 1))


def test_simple_2_matching_against_exhaustive():
    rng = random.Random(8)
    for _ in range(100):
        n = rng.randint(3, 9)
        g = random_graph(rng, n, rng.randint(0, 15))
        m = max_simple_2_matching(g)
        assert all(d <= 2 for d in degrees(g, m))
        assert len(m) == exact_max_2_matching_size(g)


def test_simple_2_matching_on_complete_graph_is_hamiltonian():
    assert len(max_simple_2_matching(complete(6))) == 6
