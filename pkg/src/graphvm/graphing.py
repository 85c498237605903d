"""Weighted graphings: carrier, weighted realized edges, classification, cost.

A graphing is a finite family of edges over a carrier set, each edge a
weight, a source set and a realizer; the target is always derived as
the image of the source.  Graphings are classified as deterministic
(unit weights, disjoint sources), non-deterministic (unit weights),
probabilistic (weights in [0,1] summing to at most 1 wherever sources
overlap) or general.  Null-measure conditions are checked as exact
emptiness, which the half-open box representation makes equivalent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .space import MeasurableSet, common_refinement
from .realizers import Microcosm, Realizer

UNIT = Fraction(1)


class WeightMonoid:
    """Weights an edge may carry, with their product and unit."""

    name = "generic"

    def one(self):
        raise NotImplementedError

    def product(self, a, b):
        raise NotImplementedError

    def admits(self, w) -> bool:
        raise NotImplementedError

    def is_unit(self, w) -> bool:
        return w == self.one()

    def __repr__(self):
        return f"<{self.name} weights>"


class TrivialWeights(WeightMonoid):
    """The one-element monoid: every edge weighs 1."""

    name = "trivial"

    def one(self):
        return UNIT

    def product(self, a, b):
        return UNIT

    def admits(self, w):
        return w == UNIT


class ProbabilityWeights(WeightMonoid):
    """Rationals in [0,1] under multiplication."""

    name = "probabilities"

    def one(self):
        return UNIT

    def product(self, a, b):
        return a * b

    def admits(self, w):
        return isinstance(w, Fraction) and 0 <= w <= 1


class TableWeights(WeightMonoid):
    """A finite monoid given by its elements and multiplication table."""

    name = "table"

    def __init__(self, elements, table, unit):
        self.elements = tuple(elements)
        self.table = dict(table)
        self.unit = unit
        if unit not in self.elements:
            raise ValueError("unit must be one of the elements")
        for a in self.elements:
            for b in self.elements:
                if (a, b) not in self.table:
                    raise ValueError(f"table misses product {a}*{b}")
                if self.table[(a, b)] not in self.elements:
                    raise ValueError("table closes outside the elements")
        for a in self.elements:
            if self.table[(unit, a)] != a or self.table[(a, unit)] != a:
                raise ValueError("unit law fails")
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if self.table[(self.table[(a, b)], c)] != \
                            self.table[(a, self.table[(b, c)])]:
                        raise ValueError("associativity fails")

    def one(self):
        return self.unit

    def product(self, a, b):
        return self.table[(a, b)]

    def admits(self, w):
        return w in self.elements


TRIVIAL = TrivialWeights()
PROBABILITIES = ProbabilityWeights()


class WeightError(ValueError):
    pass


def join_monoids(a: WeightMonoid, b: WeightMonoid) -> WeightMonoid:
    """Common monoid when one embeds in the other (trivial embeds in all)."""
    if a is b or type(a) is type(b):
        return a
    if isinstance(a, TrivialWeights):
        return b
    if isinstance(b, TrivialWeights):
        return a
    raise WeightError(f"incompatible weight monoids: {a!r} vs {b!r}")


@dataclass(frozen=True)
class Edge:
    weight: Fraction
    source: MeasurableSet
    realizer: Realizer

    @cached_property
    def target(self) -> MeasurableSet:
        return self.realizer.apply(self.source)

    def key(self):
        return (tuple(b.key() for b in self.source.boxes),
                self.realizer.key(), self.weight)


class GraphingClass(enum.Enum):
    DETERMINISTIC = "deterministic"
    NONDETERMINISTIC = "nondeterministic"
    PROBABILISTIC = "probabilistic"
    GENERAL = "general"

    def admits_deterministic(self) -> bool:
        return True  # deterministic graphings belong to every class


@dataclass(frozen=True)
class Graphing:
    weights: WeightMonoid
    microcosm: Microcosm
    carrier: MeasurableSet
    edges: tuple[Edge, ...]

    @staticmethod
    def make(weights, microcosm, carrier, edges) -> "Graphing":
        return Graphing(weights, microcosm, carrier,
                        tuple(sorted(edges, key=Edge.key)))

    def canonical_key(self):
        return (tuple(b.key() for b in self.carrier.boxes),
                tuple(e.key() for e in self.edges))

    def same_as(self, other: "Graphing") -> bool:
        """Equality as canonical graphings (carrier plus edge multiset)."""
        return self.canonical_key() == other.canonical_key()


def empty_graphing(weights=TRIVIAL, microcosm=None,
                   carrier=None) -> Graphing:
    return Graphing.make(weights, microcosm or Microcosm.macrocosm(),
                         carrier or MeasurableSet.empty(), ())


def validate(g: Graphing) -> list[str]:
    """All invariant violations, empty when the graphing is well formed."""
    problems = []
    for i, e in enumerate(g.edges):
        if not g.weights.admits(e.weight):
            problems.append(f"edge {i}: weight {e.weight} not in monoid")
        dom = e.realizer.domain_within(e.source)
        if dom.measure() != e.source.measure():
            problems.append(f"edge {i}: source exceeds realizer domain")
            continue
        if not e.source.subset_of(g.carrier):
            problems.append(f"edge {i}: source not in carrier")
        if not e.target.subset_of(g.carrier):
            problems.append(f"edge {i}: target not in carrier")
        if not g.microcosm.contains(e.realizer):
            problems.append(f"edge {i}: realizer not in microcosm "
                            f"{g.microcosm.describe()}")
    return problems


def classify(g: Graphing) -> GraphingClass:
    """Strongest applicable class of the graphing."""
    all_unit = all(g.weights.is_unit(e.weight) for e in g.edges)
    overlap = False
    for i, e in enumerate(g.edges):
        for f in g.edges[i + 1:]:
            if not e.source.intersect(f.source).is_empty():
                overlap = True
                break
        if overlap:
            break
    if all_unit and not overlap:
        return GraphingClass.DETERMINISTIC
    if all_unit:
        return GraphingClass.NONDETERMINISTIC
    rational = all(isinstance(e.weight, Fraction) and 0 <= e.weight <= 1
                   for e in g.edges)
    if rational and _probabilistic_sums_ok(g):
        return GraphingClass.PROBABILISTIC
    return GraphingClass.GENERAL


def _probabilistic_sums_ok(g: Graphing) -> bool:
    parts = common_refinement([e.source for e in g.edges])
    for part in parts:
        part_set = MeasurableSet.of(part)
        total = Fraction(0)
        for e in g.edges:
            if part_set.subset_of(e.source):
                total += e.weight
        if total > 1:
            return False
    return True


def cost(g: Graphing) -> Fraction:
    """Sum of the source measures over all edges."""
    return sum((e.source.measure() for e in g.edges), Fraction(0))


def disjoint_union(f: Graphing, g: Graphing) -> Graphing:
    if not f.carrier.intersect(g.carrier).is_empty():
        raise ValueError("carriers overlap; disjoint union undefined")
    monoid = join_monoids(f.weights, g.weights)
    return Graphing.make(monoid, f.microcosm.join(g.microcosm),
                         f.carrier.union(g.carrier), f.edges + g.edges)
