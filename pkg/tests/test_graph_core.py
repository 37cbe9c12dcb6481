import networkx as nx
import pytest

from twoecss.errors import ComponentsNotTwoEC
from twoecss.graph_core import (
    Graph, bridges, component_graph, components, contract, cut_vertices, decompose,
    find_3_matching, induced, is_two_edge_connected, is_two_vertex_connected, size_class,
    two_vertex_cuts,
)
from twoecss.instances import cycle, petersen, random_2ec

from gen import planted


def to_nx(g, eids=None):
    h = nx.MultiGraph()
    h.add_nodes_from(range(g.n))
    for e in (g.edge_ids() if eids is None else eids):
        h.add_edge(*g.ends(e), key=e)
    return h


def test_simple_mode_rejects_loops_and_parallels():
    g = Graph(3, [(0, 1)])
    with pytest.raises(ValueError):
        g.add_edge(1, 0)
    with pytest.raises(ValueError):
        g.add_edge(2, 2)
    multi = Graph(3, [(0, 1), (0, 1), (2, 2)], simple_mode=False)
    assert multi.m == 3 and not multi.is_simple()


def test_remove_edge_and_copy_are_independent():
    g = cycle(5)
    h = g.copy()
    h.remove_edge(0)
    assert g.m == 5 and h.m == 4
    assert not h.is_live(0) and g.is_live(0)
    with pytest.raises(KeyError):
        h.ends(0)


def test_bridges_match_networkx():
    for seed in range(40):
        g = planted(seed, deg=(0, 1))
        ours = {frozenset(g.ends(e)) for e in bridges(g)}
        theirs = {frozenset(e) for e in nx.bridges(nx.Graph(to_nx(g)))}
        assert ours == theirs


def test_parallel_edges_are_never_bridges():
    g = Graph(3, [(0, 1), (0, 1), (1, 2)], simple_mode=False)
    assert bridges(g) == [2]


def test_two_edge_connectivity_of_subsets():
    g = petersen()
    assert is_two_edge_connected(g)
    outer = [e for e in g.edge_ids() if max(g.ends(e)) < 5]
    assert is_two_edge_connected(g, outer, nodes=range(5))
    assert not is_two_edge_connected(g, outer)


def test_cut_vertices_and_2vc_match_networkx():
    for seed in range(30):
        g = random_2ec(12, seed % 4, seed=seed)
        h = nx.Graph(to_nx(g))
        assert set(cut_vertices(g)) == set(nx.articulation_points(h))
        assert is_two_vertex_connected(g) == nx.is_biconnected(h)


def test_two_vertex_cuts_match_brute_force():
    for seed in range(20):
        g = random_2ec(9, seed % 5, seed=seed)
        h = nx.Graph(to_nx(g))
        brute = set()
        for u in range(g.n):
            for v in range(u + 1, g.n):
                rest = h.copy()
                rest.remove_nodes_from([u, v])
                if not nx.is_connected(rest):
                    brute.add((u, v))
        assert {(c.u, c.v) for c in two_vertex_cuts(g)} == brute


def test_contract_drops_loops_and_keeps_parallels():
    g = cycle(4)
    d = contract(g, [0, 1])
    assert d.graph.n == 3
    assert d.graph.m == 3
    assert d.lift(range(d.graph.m)) == {1, 2, 3}


def test_induced_relabels_in_order():
    g = petersen()
    d = induced(g, [5, 7, 9, 6, 8])
    assert d.graph.n == 5 and d.graph.m == 5
    assert d.vertex_map[5] == 0 and d.vertex_map[0] == -1


def test_component_graph_requires_2ec_parts():
    g = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (2, 5)])
    cg, member = component_graph(g, range(6))
    assert cg.n == 2 and cg.m == 1
    assert member[:3] == [member[0]] * 3
    with pytest.raises(ComponentsNotTwoEC):
        component_graph(g, [0, 1, 6])


def test_find_3_matching_and_cover():
    g = Graph(6, [(0, 3), (1, 4), (2, 5), (0, 4)])
    assert find_3_matching(g, [0, 1, 2], [3, 4, 5]).matching is not None
    star = Graph(6, [(0, 3), (0, 4), (0, 5), (1, 3)])
    res = find_3_matching(star, [0, 1, 2], [3, 4, 5])
    assert res.matching is None and res.size == 2
    assert all(a in res.cover or b in res.cover for a, b in (star.ends(e) for e in star.edge_ids()))


@pytest.mark.parametrize("nodes,edges,expected", [
    (3, 3, "triangle"), (4, 4, "cycle4"), (5, 5, "cycle5"), (6, 6, "cycle6"),
    (7, 7, "large"), (5, 7, "large"), (4, 5, "other"), (5, 6, "other"),
])
def test_size_class(nodes, edges, expected):
    assert size_class(nodes, edges) == expected


def test_decompose_blocks_bridges_lonely():
    # two triangles joined through a lonely vertex 3, plus a 4-cycle
    g = Graph(11, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 4),
                   (7, 8), (8, 9), (9, 10), (10, 7)])
    d = decompose(g, g.edge_ids())
    assert [c.size_class for c in d.two_ec_components] == ["cycle4"]
    assert len(d.non_2ec) == 1
    comp = d.non_2ec[0]
    assert comp.lonely == frozenset({3})
    assert len(comp.bridges) == 2 and len(comp.blocks) == 2
    assert all(d.blocks[i].leaf for i in comp.blocks)


def test_components_sorted():
    g = Graph(5, [(3, 4), (0, 1)])
    assert components(g) == [[0, 1], [2], [3, 4]]
