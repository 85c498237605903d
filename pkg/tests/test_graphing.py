from fractions import Fraction

import pytest

from graphvm.graphing import (Edge, Graphing, GraphingClass, PROBABILITIES,
                              TRIVIAL, TableWeights, WeightError, classify,
                              cost, disjoint_union, join_monoids, validate)
from graphvm.realizers import Microcosm, Realizer
from graphvm.space import MeasurableSet, RationalBox, interval


def ms(*boxes):
    return MeasurableSet.from_boxes(boxes)


def cellbox(cell, lo=None, hi=None):
    if lo is None:
        return RationalBox.make(cell)
    return RationalBox.make(cell, {1: interval(lo, hi)})


def simple(edges, carrier_cells=(0, 1, 2), monoid=TRIVIAL):
    carrier = ms(*[cellbox(c) for c in carrier_cells])
    return Graphing.make(monoid, Microcosm.macrocosm(), carrier, edges)


def test_validate_empty_ok():
    assert validate(simple([])) == []


def test_validate_source_outside_carrier():
    g = simple([Edge(Fraction(1), ms(cellbox(9)), Realizer.shift_by(1))],
               carrier_cells=(9, 10))
    assert validate(g) == []
    bad = simple([Edge(Fraction(1), ms(cellbox(9)), Realizer.shift_by(1))],
                 carrier_cells=(10,))
    assert any("source not in carrier" in p for p in validate(bad))


def test_validate_target_outside_carrier():
    bad = simple([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(5))])
    assert any("target not in carrier" in p for p in validate(bad))


def test_validate_microcosm_membership():
    word_edge = Realizer.make(1, None, {1: Fraction(1, 2)})
    src = ms(cellbox(0, 0, "1/2"))
    g = Graphing.make(TRIVIAL, Microcosm.m1(), ms(cellbox(0), cellbox(1)),
                      [Edge(Fraction(1), src, word_edge)])
    assert any("not in microcosm" in p for p in validate(g))
    ok = Graphing.make(TRIVIAL, Microcosm.macrocosm(),
                       ms(cellbox(0), cellbox(1)),
                       [Edge(Fraction(1), src, word_edge)])
    assert validate(ok) == []


def test_validate_domain():
    bad = simple([Edge(Fraction(1), ms(cellbox(0)),
                       Realizer.make(1, None, {1: Fraction(1, 2)}))])
    assert any("exceeds realizer domain" in p for p in validate(bad))


def test_classify_examples():
    a = Edge(Fraction(1), ms(cellbox(0, 0, "1/2")), Realizer.shift_by(1))
    b = Edge(Fraction(1), ms(cellbox(0, "1/2", 1)), Realizer.shift_by(2))
    assert classify(simple([a, b])) == GraphingClass.DETERMINISTIC
    c = Edge(Fraction(1), ms(cellbox(0, 0, "3/4")), Realizer.shift_by(2))
    assert classify(simple([a, c])) == GraphingClass.NONDETERMINISTIC
    heavy = [Edge(Fraction(1, 2), ms(cellbox(0, 0, "3/4")), Realizer.shift_by(1)),
             Edge(Fraction(2, 3), ms(cellbox(0, 0, "1/2")), Realizer.shift_by(2))]
    assert classify(simple(heavy, monoid=PROBABILITIES)) == GraphingClass.GENERAL
    light = [Edge(Fraction(1, 2), ms(cellbox(0, 0, "3/4")), Realizer.shift_by(1)),
             Edge(Fraction(1, 2), ms(cellbox(0, 0, "1/2")), Realizer.shift_by(2))]
    assert classify(simple(light, monoid=PROBABILITIES)) == \
        GraphingClass.PROBABILISTIC


def test_classify_deterministic_implies_probabilistic_admissible():
    a = Edge(Fraction(1), ms(cellbox(0, 0, "1/2")), Realizer.shift_by(1))
    g = simple([a], monoid=PROBABILITIES)
    assert classify(g) == GraphingClass.DETERMINISTIC


def test_cost_examples():
    assert cost(simple([])) == 0
    one = Edge(Fraction(1), ms(cellbox(0, 0, "1/2")), Realizer.shift_by(1))
    assert cost(simple([one])) == Fraction(1, 2)


def test_cost_invariant_under_source_splitting():
    whole = Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(1))
    left = Edge(Fraction(1), ms(cellbox(0, 0, "1/3")), Realizer.shift_by(1))
    right = Edge(Fraction(1), ms(cellbox(0, "1/3", 1)), Realizer.shift_by(1))
    assert cost(simple([whole])) == cost(simple([left, right]))


def test_disjoint_union():
    f = simple([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(1))],
               carrier_cells=(0, 1))
    g = simple([Edge(Fraction(1), ms(cellbox(5)), Realizer.shift_by(1))],
               carrier_cells=(5, 6))
    u = disjoint_union(f, g)
    assert validate(u) == []
    assert classify(u) == GraphingClass.DETERMINISTIC
    assert cost(u) == cost(f) + cost(g)
    empty = simple([], carrier_cells=(9,))
    assert disjoint_union(f, empty).edges == f.edges
    with pytest.raises(ValueError):
        disjoint_union(f, f)


def test_join_monoids():
    assert join_monoids(TRIVIAL, PROBABILITIES) is PROBABILITIES
    assert join_monoids(TRIVIAL, TRIVIAL) is TRIVIAL
    table = TableWeights(("e", "a"), {("e", "e"): "e", ("e", "a"): "a",
                                      ("a", "e"): "a", ("a", "a"): "e"}, "e")
    with pytest.raises(WeightError):
        join_monoids(table, PROBABILITIES)
    assert join_monoids(table, TRIVIAL) is table


def test_table_weights_laws_checked():
    with pytest.raises(ValueError):
        TableWeights(("e", "a"), {("e", "e"): "e", ("e", "a"): "a",
                                  ("a", "e"): "e", ("a", "a"): "e"}, "e")


def test_target_is_derived():
    e = Edge(Fraction(1), ms(cellbox(0, 0, "1/2")),
             Realizer.make(1, None, {1: Fraction(1, 2)}))
    assert e.target == ms(cellbox(1, "1/2", 1))
