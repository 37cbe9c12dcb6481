"""Exception types raised across the package."""

from __future__ import annotations


class TwoEcssError(Exception):
    """Base class for every error raised by this package."""


class NotACover(TwoEcssError):
    """Some node has fewer than two incident edges in a supposed 2-edge-cover."""


class ComponentsNotTwoEC(TwoEcssError):
    """A connected component of an edge set is not 2-edge-connected."""


class OddVertexCount(TwoEcssError):
    """A perfect matching was requested on an odd number of vertices."""


class UncoverableNode(TwoEcssError):
    """A node has degree below two in the host graph."""


class StructureViolation(TwoEcssError):
    """A witness that the structured-input assumptions guarantee was not found."""


class NoFeasibleType(TwoEcssError):
    """No type A, B or C subgraph is feasible on the small side of a cut."""


class NotTwoEC(TwoEcssError):
    """The input graph is not 2-edge-connected."""


class BoundViolated(TwoEcssError):
    """An initial cost exceeded its closed-form upper bound."""


class CostIncrease(TwoEcssError):
    """A transformation step increased the credit-weighted cost."""


class ThreeOptimalityBreach(TwoEcssError):
    """A local merge found a swap that a 3-optimal cover cannot admit."""


class LimitExceeded(TwoEcssError):
    """An exhaustive search was asked to run beyond its configured limits."""


class OddTSize(TwoEcssError):
    """A T-join was requested for a set T of odd cardinality."""


class BadSpec(TwoEcssError):
    """An instance specification could not be parsed or realized."""
