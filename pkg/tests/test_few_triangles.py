from collections import Counter
from fractions import Fraction

import pytest

from twoecss.cover import canonicalize, min_two_edge_cover
from twoecss.errors import CostIncrease, StructureViolation, ThreeOptimalityBreach
from twoecss.few_triangles import (
    FewTrianglesRun, bridge_cover_step, build_bridge_tree, c5c4_nine, covering_path,
    find_cheap_path, gluing_step, local_merge, reachable_set, solve_few,
)
from twoecss.graph_core import Graph, bridges, components, decompose, is_two_edge_connected
from twoecss.oracle import OracleLimits, exact_2ecss, verify_2ec_spanning
from twoecss.reduction import structural_checks

from gen import dense, planted, planted_with_cover, spine_with_blocks


def ring(nodes):
    return [(nodes[i], nodes[(i + 1) % len(nodes)]) for i in range(len(nodes))]


def test_bridge_tree_shape():
    g, s = spine_with_blocks(0)
    bt = build_bridge_tree(g, s)
    kinds = Counter(bt.node_kind[x] for x in range(bt.tree.n) if bt.in_tree(x))
    assert kinds["block"] >= 2
    assert len(bt.bridge_edges) == len(decompose(g, s).bridges)


def test_covering_path_credit():
    g, s = spine_with_blocks(3)
    bt = build_bridge_tree(g, s)
    tree_nodes = [x for x in range(bt.tree.n) if bt.in_tree(x)]
    reach = reachable_set(bt, [tree_nodes[0]])
    assert reach
    p = covering_path(bt, tree_nodes[0], min(reach))
    assert p.cheap == (Fraction(p.br, 4) + p.bl >= 2)
    best = find_cheap_path(bt)
    assert best is None or best.cheap


def test_bridge_steps_remove_bridges_without_raising_cost():
    labels, done = Counter(), 0
    for seed in range(120):
        g, s = spine_with_blocks(seed)
        if not is_two_edge_connected(g):
            continue
        log = []
        try:
            while decompose(g, s).non_2ec:
                before = set(bridges(g, s))
                s = bridge_cover_step(g, s, log)
                assert set(bridges(g, s)) < before
        except StructureViolation:
            continue  # these inputs are not structured; the step may give up
        done += 1
        assert all(delta >= 0 for _, delta in log)
        labels.update(label for label, _ in log)
    assert done >= 60
    assert {"cheap-path", "path-pair-search"} <= set(labels)


def test_gluing_steps_lower_component_count():
    labels, done = Counter(), 0
    for seed in range(150):
        g, s = planted_with_cover(seed)
        if not is_two_edge_connected(g):
            continue
        log = []
        try:
            while len(components(g, s)) > 1:
                k = len(components(g, s))
                s = gluing_step(g, s, log)
                assert len(components(g, s)) < k
        except (StructureViolation, ThreeOptimalityBreach):
            continue
        done += 1
        assert all(delta >= 0 for _, delta in log)
        labels.update(label for label, _ in log)
    assert done >= 40
    assert {"gluing-path", "merge-4cycle", "merge-5cycle"} <= set(labels)


def test_local_merge_four_cycle_into_six_cycle():
    # a 4-cycle and a 6-cycle joined by the 3-matching 0-4, 1-6, 2-8
    g = Graph(10, ring([0, 1, 2, 3]) + ring(list(range(4, 10))) + [(0, 4), (1, 6), (2, 8)])
    new_s, label = local_merge(g, frozenset(range(10)))
    assert label == "merge-4cycle"
    assert len(new_s) == 11 and is_two_edge_connected(g, new_s)


def test_local_merge_two_four_cycles_is_a_breach():
    # two 4-cycles with a 3-matching can be merged without extra edges
    g = Graph(8, ring([0, 1, 2, 3]) + ring([4, 5, 6, 7]) + [(0, 4), (1, 5), (2, 6)])
    with pytest.raises(ThreeOptimalityBreach):
        local_merge(g, frozenset(range(8)))


def test_c5c4_nine():
    g = Graph(9, ring([0, 1, 2, 3, 4]) + ring([5, 6, 7, 8]) + [(0, 5), (2, 7)])
    five, four = frozenset(range(5)), frozenset(range(5, 9))
    f = c5c4_nine(g, five, four, frozenset(range(5)), frozenset(range(5, 9)), 1, 6)
    assert f is not None and len(f) == 9


def test_solve_few_on_structured_inputs():
    runs = 0
    for seed in range(60):
        g = planted(seed) if seed % 2 else dense(seed, tree=seed % 3 == 0)
        if not structural_checks(g).ok:
            continue
        h = canonicalize(g, min_two_edge_cover(g))
        run, log = FewTrianglesRun(), []
        sol, lower = solve_few(g, h, log, run)
        assert verify_2ec_spanning(g, sol)
        assert lower == len(h) <= len(sol)
        assert len(sol) <= run.initial_cost
        assert all(delta >= 0 for _, delta in log)
        if g.n <= 16 and g.m <= 30:
            opt = len(exact_2ecss(g, OracleLimits(max_nodes=20, max_edges=40)))
            assert Fraction(len(sol), opt) <= Fraction(4, 3)
        runs += 1
    assert runs >= 15


def test_gluing_rejects_a_cost_increase(monkeypatch):
    # a rewrite that adds an edge and keeps every credit is caught by the monitor
    import twoecss.few_triangles as ft
    g = Graph(8, ring([0, 1, 2, 3]) + ring([4, 5, 6, 7]) + [(1, 4), (2, 7), (0, 5)])
    s = frozenset(range(8))
    monkeypatch.setattr(ft, "local_merge", lambda g, s: (s | {8, 9, 10}, "bogus"))
    with pytest.raises(CostIncrease):
        gluing_step(g, s)
