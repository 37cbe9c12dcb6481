import random
from fractions import Fraction

import pytest

from twoecss.errors import NoFeasibleType, NotTwoEC
from twoecss.graph_core import Graph, two_vertex_cuts
from twoecss.instances import cycle, petersen, prism, random_2ec
from twoecss.oracle import OracleLimits, exact_2ecss, verify_2ec_spanning
from twoecss.pipeline import solve_structured
from twoecss.reduction import (
    ReductionParams, _Reducer, abc_optima, abc_type, connected_subsets, find_contractible,
    find_irrelevant_edge, red_solve, replay, structural_checks,
)

BIG = OracleLimits(max_nodes=20, max_edges=40)
LOW = ReductionParams(exact_base_bound=5)


def glued(seed, n1, n2):
    """Two random 2EC blobs sharing vertices 0 and 1, without the edge 01."""
    rng = random.Random(seed)
    a = random_2ec(n1, 2, seed=2 * seed + 1)
    b = random_2ec(n2, 2, seed=2 * seed + 2)
    edges = {a.ends(e) for e in a.edge_ids()}
    ub, vb = rng.sample(range(n2), 2)
    relabel, nxt = {ub: 0, vb: 1}, n1
    for x in range(n2):
        if x not in relabel:
            relabel[x] = nxt
            nxt += 1
    for e in b.edge_ids():
        x, y = (relabel[z] for z in b.ends(e))
        edges.add((min(x, y), max(x, y)))
    edges.discard((0, 1))
    return Graph(nxt, sorted(edges))


def test_params_validation_and_gates():
    p = ReductionParams()
    assert p.base_gate == 12 and p.search_bound == 6 and p.small_side == 4
    assert ReductionParams(epsilon=Fraction(1, 4)).base_gate == 8
    with pytest.raises(ValueError):
        ReductionParams(alpha=Fraction(1, 1))
    with pytest.raises(ValueError):
        ReductionParams(epsilon=Fraction(3, 2))
    with pytest.raises(ValueError):
        ReductionParams(exact_base_bound=4)


def test_connected_subsets_order():
    subs = connected_subsets(cycle(5), 3, 2)
    assert subs[0] == (0, 1)
    assert all(len(a) <= len(b) for a, b in zip(subs, subs[1:]))
    assert len([s for s in subs if len(s) == 3]) == 5


def test_forced_four_cycle_is_contractible():
    # nodes 1 and 3 have degree two, so the 4-cycle 0-1-2-3 is always kept whole
    g = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 7), (7, 2),
                  (4, 6), (5, 7)])
    w, c = find_contractible(g)
    assert len(w) <= 4 and len(c) >= len(w)


def test_irrelevant_edge():
    # {0, 2} separates 1 from 3, so the chord 0-2 is irrelevant
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    assert find_irrelevant_edge(g) == g.edge_between(0, 2)
    assert find_irrelevant_edge(petersen()) is None


def two_triangles():
    # u=0 and v=1 each sit in a triangle; the single edge 2-4 links the triangles
    return Graph(6, [(0, 2), (0, 3), (2, 3), (1, 4), (1, 5), (4, 5), (2, 4)])


def test_abc_type_classifies_hand_sets():
    g = two_triangles()
    tri = [g.edge_between(*p) for p in [(0, 2), (0, 3), (2, 3), (1, 4), (1, 5), (4, 5)]]
    path = [g.edge_between(*p) for p in [(0, 3), (3, 2), (2, 4), (4, 5), (5, 1)]]
    assert abc_type(g, tri, 0, 1) == "C"
    assert abc_type(g, path, 0, 1) == "B"
    assert abc_type(g, g.edge_ids(), 0, 1) == "B"
    square = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert abc_type(square, square.edge_ids(), 0, 2) == "A"


def test_abc_optima_by_hand():
    res = abc_optima(two_triangles(), 0, 1, True, True)
    assert res.opt_a is None
    assert len(res.opt_b) == 5 and len(res.opt_c) == 6
    assert res.min_type == "B"
    res = abc_optima(two_triangles(), 0, 1, True, False)
    assert res.opt_b is None and res.min_type == "C"
    with pytest.raises(NoFeasibleType):
        abc_optima(two_triangles(), 0, 1, False, False)


def test_abc_optima_infeasible():
    # inner vertex 1 has degree one, so nothing covers it twice
    g = Graph(3, [(0, 1), (0, 2)])
    with pytest.raises(NoFeasibleType):
        abc_optima(g, 0, 2, True, True)


def test_red_solve_rejects_non_2ec():
    with pytest.raises(NotTwoEC):
        red_solve(Graph(3, [(0, 1), (1, 2)]))


@pytest.mark.parametrize("g", [cycle(9), petersen(), prism(4)], ids=["C9", "petersen", "prism4"])
def test_exact_base_is_optimal(g):
    res, trace = red_solve(g)
    assert trace.root.kind == "ExactBase"
    assert len(res) == len(exact_2ecss(g, BIG))


def test_cut_node_split():
    # two 8-cycles sharing vertex 0
    edges = [(i, i + 1) for i in range(7)] + [(0, 7)]
    edges += [(0, 8)] + [(i, i + 1) for i in range(8, 14)] + [(0, 14)]
    g = Graph(15, edges)
    res, trace = red_solve(g)
    assert trace.root.kind == "CutNodeSplit"
    assert len(res) == 16 and verify_2ec_spanning(g, res)


def test_large_side_surgery():
    g = glued(43, 8, 9)
    res, trace = red_solve(g, ReductionParams(), solve_structured)
    assert "NonIsolatingLargeSide" in trace.kinds()
    assert verify_2ec_spanning(g, res)
    assert replay(trace.root) == res


def test_dummy_node_surgery():
    g = glued(4, 4, 12)
    res, trace = red_solve(g, ReductionParams(), solve_structured)
    assert "NonIsolatingDummyNode" in trace.kinds()
    assert verify_2ec_spanning(g, res)


def test_dummy_edge_surgery():
    # the small side is two forced 4-cycles joined by one edge, so type C beats type B
    ring = [(i, (i + 1) % 10) for i in range(10)] + [(1, 6), (2, 7), (3, 8), (4, 9)]
    a, x, b, c, y, d = range(10, 16)
    side = [(0, a), (a, x), (x, b), (b, 0), (5, c), (c, y), (y, d), (d, 5), (x, y)]
    g = Graph(16, [tuple(sorted(e)) for e in ring + side])
    cut = next(k for k in two_vertex_cuts(g) if (k.u, k.v) == (0, 5))
    p = ReductionParams(epsilon=Fraction(1, 10), contractible_bound=10)
    node = _Reducer(p, solve_structured).surgery(g, cut)
    assert node.kind == "NonIsolatingDummyEdge" and node.info["type"] == "C"
    assert verify_2ec_spanning(g, node.result)
    assert len(node.result) == len(exact_2ecss(g, BIG))


def test_every_structured_input_is_certified():
    seen = 0
    for seed in range(60):
        g = random_2ec(6 + seed % 7, seed % 6, seed=seed)
        res, trace = red_solve(g, LOW, solve_structured)
        assert verify_2ec_spanning(g, res)
        assert replay(trace.root) == res
        for h in trace.structured_inputs():
            assert structural_checks(h, LOW).ok
            seen += 1
    assert seen >= 5


def test_trace_kinds_cover_reductions():
    kinds = set()
    for seed in range(60):
        g = random_2ec(6 + seed % 7, seed % 6, seed=seed)
        kinds |= set(red_solve(g, LOW, solve_structured)[1].kinds())
    assert {"ExactBase", "Contract", "SimplifyEdge", "DeleteIrrelevant",
            "StructuredSolve"} <= kinds
