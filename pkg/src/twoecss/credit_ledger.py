"""Credit bookkeeping for partial solutions, with exact rational costs.

Two schemes exist.  Scheme ``"M"`` (many triangles) charges only 2EC
components: a light one (a triangle that was a whole component of the
initial cover) holds 1/2, every other one holds 2.  Scheme ``"F"`` (few
triangles) charges 2EC components by size, and also non-2EC components,
their bridges and their blocks.

``cost(S) = |S| + credits(S)``.  Ledgers are rebuilt from scratch after
every transformation and compared through :class:`CostSnapshot`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import BoundViolated, CostIncrease
from .graph_core import CoverDecomposition, Graph, decompose

SCHEMES = ("M", "F")

LIGHT = Fraction(1, 2)
HEAVY = Fraction(2)
BRIDGE = Fraction(1, 4)
BLOCK = Fraction(1)
NON_2EC = Fraction(1)

_CYCLE_LEN = {"cycle4": 4, "cycle5": 5, "cycle6": 6}


def component_credit_f(size_class: str) -> Fraction:
    """Scheme F credit of a 2EC component of the given size class."""
    if size_class == "triangle":
        return Fraction(1)
    if size_class in _CYCLE_LEN:
        return Fraction(3 * _CYCLE_LEN[size_class], 10)
    # "large", and the small non-cycle shapes a canonical cover never has
    return Fraction(2)


@dataclass
class CreditLedger:
    scheme: str
    component_credits: dict[frozenset, Fraction] = field(default_factory=dict)
    bridge_credits: dict[int, Fraction] = field(default_factory=dict)
    block_credits: dict[int, Fraction] = field(default_factory=dict)
    light_flags: frozenset = frozenset()

    @property
    def total(self) -> Fraction:
        return (sum(self.component_credits.values(), Fraction(0))
                + sum(self.bridge_credits.values(), Fraction(0))
                + sum(self.block_credits.values(), Fraction(0)))

    def denominators_ok(self) -> bool:
        base = 2 if self.scheme == "M" else 20
        values = [*self.component_credits.values(), *self.bridge_credits.values(),
                  *self.block_credits.values()]
        return all(base % x.denominator == 0 and x >= 0 for x in values)

    def is_light(self, nodes: Iterable[int]) -> bool:
        return frozenset(nodes) in self.light_flags


@dataclass(frozen=True)
class CostSnapshot:
    edges: int
    credits: Fraction
    cost: Fraction

    @classmethod
    def of(cls, n_edges: int, ledger: CreditLedger) -> "CostSnapshot":
        credits = ledger.total
        return cls(n_edges, credits, n_edges + credits)


def assign(s: Iterable[int], d: CoverDecomposition, scheme: str,
           light_flags: Iterable[frozenset] = ()) -> CreditLedger:
    """Credit every component, bridge and block of ``d`` under ``scheme``.

    Components are keyed by their node sets.  In scheme M every component
    must be 2EC; isolated vertices count as heavy zero-edge components.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown credit scheme {scheme!r}")
    flags = frozenset(frozenset(x) for x in light_flags)
    led = CreditLedger(scheme, light_flags=flags)
    if scheme == "M":
        if d.non_2ec:
            raise ValueError("scheme M needs every component to be 2EC")
        for c in d.two_ec_components:
            led.component_credits[c.nodes] = LIGHT if c.nodes in flags else HEAVY
        return led
    for c in d.two_ec_components:
        led.component_credits[c.nodes] = component_credit_f(c.size_class)
    for c in d.non_2ec:
        led.component_credits[c.nodes] = NON_2EC
        for e in c.bridges:
            led.bridge_credits[e] = BRIDGE
        for b in c.blocks:
            led.block_credits[b] = BLOCK
    return led


def measure(g: Graph, s: Iterable[int], scheme: str,
            light_flags: Iterable[frozenset] = ()) -> tuple[CreditLedger, CostSnapshot]:
    """Rebuild the ledger of ``s`` and return it with its cost snapshot."""
    s = frozenset(s)
    led = assign(s, decompose(g, s), scheme, light_flags)
    return led, CostSnapshot.of(len(s), led)


def triangle_components(d: CoverDecomposition) -> frozenset:
    return frozenset(c.nodes for c in d.two_ec_components if c.size_class == "triangle")


def initial_cost_check(g: Graph, h: Iterable[int], scheme: str) -> CostSnapshot:
    """Cost of the start state of a regime, checked against its closed form.

    Scheme M starts from ``h`` minus its bridges and must satisfy
    ``cost <= (3/2 - t/3 + b/2)|h|``; scheme F starts from ``h`` itself and
    must satisfy ``cost <= (13/10 + t/30 - b/20)|h|``.
    """
    h = frozenset(h)
    d = decompose(g, h)
    size = len(h)
    if size == 0:
        return CostSnapshot(0, Fraction(0), Fraction(0))
    t = Fraction(sum(len(c.edges) for c in d.two_ec_components
                     if c.size_class == "triangle"), size)
    b = Fraction(len(d.bridges), size)
    if scheme == "M":
        stripped = h - d.bridges
        _, snap = measure(g, stripped, "M", triangle_components(d))
        bound = (Fraction(3, 2) - t / 3 + b / 2) * size
    elif scheme == "F":
        _, snap = measure(g, h, "F")
        bound = (Fraction(13, 10) + t / 30 - b / 20) * size
    else:
        raise ValueError(f"unknown credit scheme {scheme!r}")
    if snap.cost > bound:
        raise BoundViolated(f"scheme {scheme}: initial cost {snap.cost} exceeds {bound} "
                            f"(t={t}, b={b}, |H|={size})")
    return snap


def monitor_step(before: CostSnapshot, after: CostSnapshot, label: str,
                 log: Optional[list] = None) -> Fraction:
    """Reject a step that raises the cost; record ``(label, decrease)``."""
    delta = before.cost - after.cost
    if delta < 0:
        raise CostIncrease(f"step {label!r} raised cost from {before.cost} to {after.cost} "
                           f"(edges {before.edges}->{after.edges}, "
                           f"credits {before.credits}->{after.credits})")
    if log is not None:
        log.append((label, delta))
    return delta

