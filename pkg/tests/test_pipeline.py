import json
from fractions import Fraction

import pytest

import twoecss.pipeline as pl
from twoecss.errors import NotTwoEC, StructureViolation
from twoecss.graph_core import Graph
from twoecss.instances import complete, cycle, petersen, random_2ec
from twoecss.oracle import OracleLimits, exact_2ecss, verify_2ec_spanning
from twoecss.pipeline import RatioEnvelope, baseline_2approx, ratio_envelope_check, solve
from twoecss.reduction import ReductionParams, structural_checks

from gen import planted

REPORT_FIELDS = {
    "instance_id", "n", "m", "solution_size", "opt", "cover_size", "stats", "regime_chosen",
    "lower_bound", "ratio_vs_lower_bound", "ratio_vs_opt", "invariant_log", "wall_time",
    "fallback_used", "solution",
}


def structured_graph():
    for seed in range(1, 200, 2):
        g = planted(seed)
        if g.n > 12 and structural_checks(g).ok:
            return g
    raise AssertionError("no structured planted graph found")


def test_envelope_points():
    env = RatioEnvelope()
    assert env.crossover(0) == Fraction(69, 89)
    assert env.best(Fraction(69, 89), 0) == Fraction(118, 89)
    b = Fraction(8, 89)
    assert env.crossover(b) == 1 - b
    assert env.best(0, 0) == Fraction(13, 10)


def test_envelope_check():
    res = ratio_envelope_check()
    assert res.worst == Fraction(118, 89)
    assert Fraction(118, 89) - Fraction(1, 1000) <= res.grid_max <= Fraction(118, 89)


def test_baseline_on_cycles_and_k4():
    assert len(baseline_2approx(cycle(9))) == 9
    assert 4 <= len(baseline_2approx(complete(4))) <= 6
    with pytest.raises(NotTwoEC):
        baseline_2approx(Graph(3, [(0, 1), (1, 2)]))


def test_baseline_within_twice_opt():
    for seed in range(80):
        g = random_2ec(6 + seed % 7, seed % 9, seed=seed)
        base = baseline_2approx(g)
        assert verify_2ec_spanning(g, base)
        assert len(base) <= 2 * (g.n - 1)
        assert len(base) <= 2 * len(exact_2ecss(g, OracleLimits(max_edges=40)))


def test_cycle_is_returned_whole():
    rep = solve(cycle(10), oracle=True)
    assert rep.solution_size == 10 and rep.ratio_vs_opt == 1
    assert rep.regime_chosen == "exact_base"


def test_petersen_report():
    rep = solve(petersen(), instance_id="petersen", oracle=True)
    assert rep.opt == 11 and rep.solution_size <= 14
    d = json.loads(rep.to_json())
    assert set(d) == REPORT_FIELDS
    assert d["ratio_vs_opt"] == str(rep.ratio_vs_opt)
    assert "wall_time" not in json.loads(rep.to_json(timing=False))


def test_large_instance_skips_the_oracle():
    g = random_2ec(30, 10, seed=1)
    rep = solve(g, oracle=True)
    assert rep.opt is None and rep.ratio_vs_opt is None
    assert rep.cover_size <= rep.lower_bound <= rep.solution_size
    assert rep.ratio_vs_lower_bound == Fraction(rep.solution_size, rep.lower_bound)


def test_never_worse_than_baseline():
    low = ReductionParams(exact_base_bound=5)
    for seed in range(40):
        g = random_2ec(8 + seed % 10, seed % 7, seed=seed)
        rep = solve(g, low)
        assert verify_2ec_spanning(g, rep.solution)
        assert rep.solution_size <= len(baseline_2approx(g))


def test_structured_root_uses_a_regime():
    rep = solve(structured_graph())
    assert rep.regime_chosen in ("many", "few")
    assert not rep.fallback_used


def test_fallback_when_both_regimes_fail(monkeypatch):
    def broken(*args, **kw):
        raise StructureViolation("forced")

    monkeypatch.setattr(pl, "solve_many", broken)
    monkeypatch.setattr(pl, "solve_few", broken)
    g = structured_graph()
    rep = solve(g)
    assert rep.fallback_used and rep.regime_chosen == "reduced-composite"
    assert verify_2ec_spanning(g, rep.solution)
    errors = [x for x in rep.invariant_log if x.get("error") == "StructureViolation"]
    assert len(errors) == 2
    assert any(x.get("fallback") for x in rep.invariant_log)


def test_solve_rejects_non_2ec():
    with pytest.raises(NotTwoEC):
        solve(Graph(4, [(0, 1), (1, 2), (2, 3)]))
