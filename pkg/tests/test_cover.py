import pytest

from twoecss.cover import (
    canonicalize, check_canonical, cover_stats, find_component_swap, is_two_edge_cover,
    min_two_edge_cover, potential, removable_edges,
)
from twoecss.errors import NotACover, UncoverableNode
from twoecss.graph_core import Graph, decompose
from twoecss.instances import complete, cycle, petersen, random_2ec
from twoecss.oracle import exact_min_2edge_cover

from gen import dense, planted


def test_cycle_cover_is_the_cycle():
    g = cycle(8)
    assert min_two_edge_cover(g) == frozenset(g.edge_ids())


def test_petersen_cover_has_ten_edges():
    h = min_two_edge_cover(petersen())
    assert len(h) == 10 and is_two_edge_cover(petersen(), h)


def test_uncoverable_node():
    with pytest.raises(UncoverableNode):
        min_two_edge_cover(Graph(3, [(0, 1), (1, 2)]))


def test_min_cover_against_exhaustive():
    checked = 0
    for seed in range(150):
        g = random_2ec(6 + seed % 7, seed % 5, seed=seed)
        if g.m > 18:
            continue
        h = min_two_edge_cover(g)
        assert is_two_edge_cover(g, h)
        assert len(h) == len(exact_min_2edge_cover(g))
        checked += 1
    assert checked >= 100


def test_removable_edges():
    g = complete(4)
    assert len(removable_edges(g, g.edge_ids())) == 6
    assert removable_edges(g, min_two_edge_cover(g)) == []


def test_swap_merges_two_triangles():
    # two triangles joined by a 4-cycle of cross edges; one swap leaves a single component
    g = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4)])
    h = [g.edge_between(*p) for p in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]]
    removed, added = find_component_swap(g, h)
    assert len(removed) == len(added)
    assert not check_canonical(g, h).prop_iii_ok
    out = canonicalize(g, h)
    assert len(out) == 6 and len(decompose(g, out).two_ec_components) == 1


def test_canonicalize_rejects_non_cover():
    with pytest.raises(NotACover):
        canonicalize(cycle(5), [0, 1])


def test_canonicalize_never_grows_and_is_canonical():
    for seed in range(40):
        g = planted(seed) if seed % 2 else dense(seed)
        h = min_two_edge_cover(g)
        log = []
        out = canonicalize(g, h, log)
        assert len(out) <= len(h)
        assert check_canonical(g, out).canonical
        pots = [potential(g, h)] + [after for _, _, after in log]
        assert all(b < a for a, b in zip(pots, pots[1:]))


def test_cover_stats_fractions():
    g = Graph(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3), (2, 3)])
    h = [e for e in g.edge_ids()]
    s = cover_stats(decompose(g, h))
    assert s.size == 8
    assert s.t == 0  # the triangle sits in a non-2EC component here
    assert s.b * 8 == 1
