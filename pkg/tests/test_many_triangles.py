import itertools
import random

import pytest

from twoecss.cover import canonicalize, min_two_edge_cover
from twoecss.errors import OddTSize, TwoEcssError
from twoecss.graph_core import Graph, components
from twoecss.instances import figure_instance, random_2ec, triangle_rich
from twoecss.many_triangles import (
    ManyTrianglesRun, finish_basic, finish_refined, gluing_step, is_core_triangle,
    is_nice_cycle, max_common_independent, min_t_join, nice_cycle,
    solve_many, strip_bridges,
)
from twoecss.oracle import OracleLimits, exact_2ecss, exact_alpha, exact_min_t_join, verify_2ec_spanning

from gen import dense, planted


def three_component_instance():
    # two 5-cycles with a triangle between them; each cycle meets the triangle in three edges
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(8 + i, 8 + (i + 1) % 5) for i in range(5)]
    edges += [(5, 6), (6, 7), (5, 7)]
    edges += [(5, 0), (6, 1), (7, 2), (5, 8), (6, 9), (7, 10)]
    return Graph(13, edges)


def test_three_component_merge():
    g = three_component_instance()
    s = frozenset(e for e in g.edge_ids() if g.ends(e) not in
                  {(0, 5), (1, 6), (2, 7), (5, 8), (6, 9), (7, 10)})
    log = []
    out = gluing_step(g, s, frozenset({frozenset({5, 6, 7})}), log)
    assert log[0][0] == "three-component-merge"
    assert log[0][1] >= 0
    assert len(components(g, out)) == 1
    assert verify_2ec_spanning(g, out)


def test_nice_cycle_on_a_ring_of_parts():
    g = Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
    parts = [[0, 1], [2, 3], [4, 5]]
    nc = nice_cycle(g, parts)
    assert is_nice_cycle(g, parts, nc.edges)
    assert sorted(set(nc.partition_sets_touched)) == [0, 1, 2]


def test_core_triangle_detection():
    fig = figure_instance("5b")
    ct = is_core_triangle(fig.graph, fig.solid)
    assert ct is not None and ct.k == 3
    assert len(ct.core_nodes) == 7


def test_figure_5b_finishes():
    fig = figure_instance("5b")
    g = fig.graph
    ct = is_core_triangle(g, fig.solid)
    basic = finish_basic(g, ct)
    refined, alpha, tj = finish_refined(g, ct)
    assert verify_2ec_spanning(g, basic) and verify_2ec_spanning(g, refined)
    assert len(basic) == len(fig.solid) + 3
    assert alpha == exact_alpha(ct, g)
    assert len(refined) <= 4 * ct.k + alpha - 1 + len(tj.join)


def brute_common_independent(n, ind1, ind2):
    for k in range(n, -1, -1):
        for combo in itertools.combinations(range(n), k):
            if ind1(combo) and ind2(combo):
                return k
    return 0


def test_matroid_intersection_against_brute_force():
    rng = random.Random(4)
    for _ in range(30):
        n_nodes = rng.randint(3, 6)
        items = [(rng.randrange(n_nodes), rng.randrange(n_nodes), rng.randrange(3))
                 for _ in range(rng.randint(1, 8))]
        items = [(a, b, c) for a, b, c in items if a != b]
        if not items:
            continue

        def forest(idx):
            parent = list(range(n_nodes))

            def find(x):
                while parent[x] != x:
                    x = parent[x]
                return x
            for j in idx:
                a, b = find(items[j][0]), find(items[j][1])
                if a == b:
                    return False
                parent[a] = b
            return True

        def colourful(idx):
            return len({items[j][2] for j in idx}) == len(idx)

        got = max_common_independent(len(items), forest, colourful)
        assert forest(got) and colourful(got)
        assert len(got) == brute_common_independent(len(items), forest, colourful)


def test_t_join_against_exhaustive():
    rng = random.Random(9)
    done = 0
    for seed in range(400):
        g = random_2ec(rng.randint(4, 10), rng.randint(0, 6), seed=seed)
        if g.m > 22:
            continue
        t = rng.sample(range(g.n), 2 * rng.randint(0, g.n // 2))
        tj = min_t_join(g, t)
        assert len(tj.join) == len(exact_min_t_join(g, t))
        done += 1
        if done == 120:
            break
    assert done == 120


def test_t_join_odd_size():
    with pytest.raises(OddTSize):
        min_t_join(random_2ec(6, 0, seed=1), [0, 1, 2])


def test_alpha_against_exhaustive():
    checked = 0
    for seed in range(300):
        g = triangle_rich(1 + seed % 4, 4 + seed % 5, seed=seed)
        run = ManyTrianglesRun()
        try:
            solve_many(g, canonicalize(g, min_two_edge_cover(g)), None, run)
        except TwoEcssError:
            continue
        ct = run.glued
        if ct.k > 4 or ct.k == 0:
            continue
        assert run.alpha == exact_alpha(ct, g)
        checked += 1
    assert checked >= 100


def test_solve_many_lower_bound_is_sound():
    for seed in range(30):
        g = triangle_rich(1 + seed % 3, 4 + seed % 4, seed=seed)
        if g.n > 16:
            continue
        h = canonicalize(g, min_two_edge_cover(g))
        sol, lower = solve_many(g, h)
        opt = len(exact_2ecss(g, OracleLimits(20, 40)))
        assert lower <= opt <= len(sol)
        assert verify_2ec_spanning(g, sol)


def test_strip_bridges_flags_triangle_components():
    # a triangle component, and a 4-cycle hanging off another 4-cycle by a bridge
    g = Graph(11, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3), (6, 7),
                   (7, 8), (8, 9), (9, 10), (10, 7)])
    s, flags = strip_bridges(g, g.edge_ids())
    assert s == frozenset(g.edge_ids()) - {g.edge_between(6, 7)}
    assert flags == frozenset({frozenset({0, 1, 2})})


def test_gluing_never_raises_cost_on_structured_inputs():
    from twoecss.reduction import structural_checks
    runs = 0
    for seed in range(40):
        g = planted(seed) if seed % 2 else dense(seed)
        if not structural_checks(g).ok:
            continue
        h = canonicalize(g, min_two_edge_cover(g))
        log = []
        sol, _ = solve_many(g, h, log)
        assert all(delta >= 0 for _, delta in log)
        assert verify_2ec_spanning(g, sol)
        runs += 1
    assert runs >= 10
