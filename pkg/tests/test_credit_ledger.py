from fractions import Fraction

import pytest

from twoecss.credit_ledger import (
    CostSnapshot, assign, component_credit_f, initial_cost_check, measure, monitor_step,
)
from twoecss.errors import CostIncrease
from twoecss.graph_core import Graph, decompose


def triangles_and_square():
    # triangle 0-1-2, triangle 3-4-5, 4-cycle 6..9, joined by cross edges
    return Graph(10, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3),
                      (6, 7), (7, 8), (8, 9), (9, 6), (0, 3), (2, 6), (5, 8), (1, 9)])


@pytest.mark.parametrize("cls,credit", [
    ("triangle", Fraction(1)), ("cycle4", Fraction(6, 5)), ("cycle5", Fraction(3, 2)),
    ("cycle6", Fraction(9, 5)), ("large", Fraction(2)), ("other", Fraction(2)),
])
def test_scheme_f_component_credits(cls, credit):
    assert component_credit_f(cls) == credit


def test_scheme_m_light_and_heavy():
    g = triangles_and_square()
    s = list(range(10))
    tri = frozenset({0, 1, 2})
    led, snap = measure(g, s, "M", [tri])
    assert led.component_credits[tri] == Fraction(1, 2)
    assert led.component_credits[frozenset({3, 4, 5})] == 2
    assert snap.cost == 10 + Fraction(1, 2) + 2 + 2
    assert led.denominators_ok()


def test_scheme_m_needs_2ec_components():
    g = triangles_and_square()
    with pytest.raises(ValueError):
        assign(range(11), decompose(g, range(11)), "M")


def test_scheme_f_bridges_and_blocks():
    g = Graph(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 6), (6, 3)])
    led, snap = measure(g, g.edge_ids(), "F")
    assert sum(led.bridge_credits.values()) == Fraction(1, 4)
    assert sum(led.block_credits.values()) == 2
    assert snap.cost == 8 + 1 + Fraction(1, 4) + 2


def test_initial_bounds_hold_on_a_cycle_cover():
    g = triangles_and_square()
    h = list(range(10))
    f = initial_cost_check(g, h, "F")
    # t = 6/10, b = 0: (13/10 + 1/50) * 10 = 66/5 and the actual cost is 10 + 1 + 1 + 6/5
    assert f.cost == Fraction(66, 5)
    m = initial_cost_check(g, h, "M")
    assert m.cost == 10 + Fraction(1, 2) * 2 + 2


def test_monitor_step():
    a = CostSnapshot(10, Fraction(3), Fraction(13))
    b = CostSnapshot(11, Fraction(1), Fraction(12))
    log = []
    assert monitor_step(a, b, "ok", log) == 1
    assert log == [("ok", 1)]
    with pytest.raises(CostIncrease):
        monitor_step(b, a, "bad")
