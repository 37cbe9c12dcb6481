import itertools
import random

import networkx as nx
import pytest

from twoecss.errors import LimitExceeded, NotTwoEC, OddVertexCount
from twoecss.graph_core import Graph
from twoecss.instances import complete, cycle, petersen, prism, random_2ec
from twoecss.oracle import (
    OracleLimits, exact_2ecss, exact_2ecss_certified, exact_min_t_join, verify_2ec_spanning,
)


def brute_2ecss(g):
    """Smallest 2EC spanning edge set, by networkx over all subsets."""
    ids = g.edge_ids()
    for k in range(g.n, len(ids) + 1):
        for combo in itertools.combinations(ids, k):
            h = nx.Graph()
            h.add_nodes_from(range(g.n))
            h.add_edges_from(g.ends(e) for e in combo)
            if nx.is_connected(h) and not any(True for _ in nx.bridges(h)):
                return k
    raise AssertionError("not 2EC")


def test_exact_against_networkx_brute_force():
    for seed in range(25):
        g = random_2ec(5 + seed % 4, seed % 4, seed=seed)
        if g.m > 13:
            continue
        res = exact_2ecss_certified(g)
        assert res.complete
        assert len(res.edges) == brute_2ecss(g)
        assert verify_2ec_spanning(g, res.edges)


@pytest.mark.parametrize("g,opt", [
    (cycle(6), 6), (complete(5), 5), (petersen(), 11), (prism(3), 6), (prism(5), 10),
], ids=["C6", "K5", "petersen", "prism3", "prism5"])
def test_known_optima(g, opt):
    assert len(exact_2ecss(g)) == opt


def test_petersen_refutes_ten():
    res = exact_2ecss_certified(petersen())
    assert 10 in res.refuted  # Petersen has no Hamiltonian cycle


def test_limits():
    with pytest.raises(LimitExceeded):
        exact_2ecss(cycle(13))
    with pytest.raises(LimitExceeded):
        exact_2ecss(petersen(), OracleLimits(node_budget=3))
    with pytest.raises(NotTwoEC):
        exact_2ecss(Graph(3, [(0, 1), (1, 2)]))


def test_verify_witnesses():
    g = cycle(5)
    assert verify_2ec_spanning(g, g.edge_ids()).ok
    v = verify_2ec_spanning(g, [0, 1, 2, 3])
    assert not v and v.witness_kind in ("isolated", "bridge")
    two = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)])
    v = verify_2ec_spanning(two, [0, 1, 2, 3, 4, 5])
    assert v.witness_kind == "unreachable"
    v = verify_2ec_spanning(two, two.edge_ids())
    assert v.witness_kind == "bridge" and v.witness == 6
    h = cycle(4)
    h.remove_edge(0)
    assert verify_2ec_spanning(h, [0]).witness_kind == "dead_edge"


def test_t_join_oracle():
    g = cycle(6)
    assert len(exact_min_t_join(g, [0, 3])) == 3
    assert len(exact_min_t_join(g, [])) == 0
    with pytest.raises(OddVertexCount):
        exact_min_t_join(g, [0])


def test_t_join_against_networkx_shortest_pairs():
    rng = random.Random(2)
    for _ in range(20):
        g = random_2ec(7, 3, seed=rng.randrange(10 ** 6))
        t = rng.sample(range(g.n), 2)
        h = nx.Graph([g.ends(e) for e in g.edge_ids()])
        assert len(exact_min_t_join(g, t)) == nx.shortest_path_length(h, *t)
