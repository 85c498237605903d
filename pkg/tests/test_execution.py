from fractions import Fraction

import pytest

from graphvm.execution import (INFINITY, MeasurementMap, T_CONL, T_DET,
                               Regions, Verdict, accept_mass, cycles,
                               evaluate_test, measurement, plug, t_prob)
from graphvm.graphing import (Edge, Graphing, GraphingClass, PROBABILITIES,
                              TRIVIAL, classify, disjoint_union)
from graphvm.realizers import Microcosm, Realizer
from graphvm.sampling import random_pair, random_triple
from graphvm.space import MeasurableSet, RationalBox, interval


def ms(*boxes):
    return MeasurableSet.from_boxes(boxes)


def cellbox(cell, lo=None, hi=None):
    if lo is None:
        return RationalBox.make(cell)
    return RationalBox.make(cell, {1: interval(lo, hi)})


def graphing(edges, cells, monoid=TRIVIAL):
    return Graphing.make(monoid, Microcosm.macrocosm(),
                         ms(*[cellbox(c) for c in cells]), edges)


def test_empty_cut_is_disjoint_union():
    f = graphing([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(1))],
                 (0, 1))
    g = graphing([Edge(Fraction(1), ms(cellbox(5)), Realizer.shift_by(1))],
                 (5, 6))
    result = plug(f, g)
    assert result.diagnostics.clean()
    assert result.graphing.same_as(disjoint_union(f, g))


def test_two_step_composition():
    # f: 0 -> 5 (into the cut), g: 5 -> 9 (out of it)
    f = graphing([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(5))],
                 (0, 5))
    g = graphing([Edge(Fraction(1), ms(cellbox(5)), Realizer.shift_by(4))],
                 (5, 9))
    result = plug(f, g)
    assert len(result.graphing.edges) == 1
    e = result.graphing.edges[0]
    assert e.source == ms(cellbox(0))
    assert e.realizer == Realizer.shift_by(9)
    assert result.paths[0].steps == (("F", 0), ("G", 0))


def test_partial_overlap_splits_domains():
    # g continues only on the left half of the cut region
    f = graphing([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(5))],
                 (0, 5))
    g = graphing([Edge(Fraction(1), ms(cellbox(5, 0, "1/2")),
                       Realizer.shift_by(4))], (5, 9))
    result = plug(f, g)
    assert len(result.graphing.edges) == 1
    assert result.graphing.edges[0].source == ms(cellbox(0, 0, "1/2"))
    assert result.diagnostics.dead_mass == Fraction(1, 2)
    assert result.dead_paths[0].source == ms(cellbox(0, "1/2", 1))


def test_weights_multiply_along_paths():
    f = graphing([Edge(Fraction(1, 2), ms(cellbox(0)), Realizer.shift_by(5))],
                 (0, 5), PROBABILITIES)
    g = graphing([Edge(Fraction(1, 3), ms(cellbox(5)), Realizer.shift_by(4))],
                 (5, 9), PROBABILITIES)
    result = plug(f, g)
    assert result.graphing.edges[0].weight == Fraction(1, 6)


def test_weight_coherence_by_replaying_steps():
    for seed in range(10):
        f, g = random_pair(seed, "prob")
        result = plug(f, g)
        sides = {"F": f, "G": g}
        for record, edge in zip(result.paths, result.graphing.edges):
            product = Fraction(1)
            replay = Realizer.identity()
            for side, idx in record.steps:
                product *= sides[side].edges[idx].weight
                replay = replay.compose(sides[side].edges[idx].realizer)
            assert product == edge.weight
            assert replay == edge.realizer


def test_budget_exhaustion_is_flagged_partial():
    f = graphing([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(5)),
                  Edge(Fraction(1), ms(cellbox(6)), Realizer.shift_by(-1))],
                 (0, 5, 6))
    g = graphing([Edge(Fraction(1), ms(cellbox(5)), Realizer.shift_by(1))],
                 (5, 6))
    result = plug(f, g, max_steps=1)
    assert not result.diagnostics.complete
    assert result.diagnostics.unresolved_mass > 0


def test_exact_loop_is_settled_divergence():
    # f: 5 -> 6, g: 6 -> 5; both regions inside the cut, a pure 2-cycle
    # reachable from outside via 0 -> 5
    f = graphing([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(5)),
                  Edge(Fraction(1), ms(cellbox(6)), Realizer.shift_by(-1))],
                 (0, 5, 6))
    g = graphing([Edge(Fraction(1), ms(cellbox(5)), Realizer.shift_by(1))],
                 (5, 6))
    cut = ms(cellbox(5), cellbox(6))
    result = plug(f, g, cut=cut)
    assert result.diagnostics.complete
    assert result.diagnostics.looping_mass > 0
    assert result.diagnostics.unresolved_mass == 0
    assert len(result.graphing.edges) == 0


def test_undetermined_only_when_it_could_flip():
    regions = Regions(ms(cellbox(100)), ms(cellbox(100)), ms(cellbox(101)))
    f = graphing([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(5)),
                  Edge(Fraction(1), ms(cellbox(6)), Realizer.shift_by(-1))],
                 (0, 5, 6))
    g = graphing([Edge(Fraction(1), ms(cellbox(5)), Realizer.shift_by(1))],
                 (5, 6))
    starved = plug(f, g, max_steps=1)
    assert evaluate_test(starved, T_DET, regions) is Verdict.UNDETERMINED
    assert evaluate_test(starved, T_CONL, regions) is Verdict.UNDETERMINED


def test_closure_properties_random():
    for mode, wanted in [("det", GraphingClass.DETERMINISTIC),
                         ("nondet", GraphingClass.NONDETERMINISTIC),
                         ("prob", GraphingClass.PROBABILISTIC)]:
        for seed in range(40):
            f, g = random_pair(seed, mode)
            result = plug(f, g)
            assert result.diagnostics.clean()
            got = classify(result.graphing)
            assert got in (wanted, GraphingClass.DETERMINISTIC), (mode, seed)


def test_associativity_random():
    for seed in range(25):
        f, g, h = random_triple(seed, "det")
        assert f.carrier.intersect(h.carrier).is_empty()
        left = plug(plug(f, g).graphing, h)
        right = plug(f, plug(g, h).graphing)
        assert left.diagnostics.clean() and right.diagnostics.clean()
        assert left.graphing.same_as(right.graphing), seed


def test_weight_monoid_mismatch_rejected():
    from graphvm.graphing import TableWeights
    table = TableWeights(("e",), {("e", "e"): "e"}, "e")
    f = Graphing.make(table, Microcosm.macrocosm(), ms(cellbox(0)), ())
    g = graphing([], (0,), PROBABILITIES)
    with pytest.raises(ValueError):
        plug(f, g)


def test_forced_two_cycle():
    A, B = ms(cellbox(0)), ms(cellbox(1))
    carrier = A.union(B)
    f = Graphing.make(TRIVIAL, Microcosm.m1(), carrier,
                      [Edge(Fraction(1), A, Realizer.shift_by(1))])
    g = Graphing.make(TRIVIAL, Microcosm.m1(), carrier,
                      [Edge(Fraction(1), B, Realizer.shift_by(-1))])
    got = cycles(f, g, max_len=2)
    assert len(got) == 1
    assert got[0].support == A
    assert measurement(f, g, MeasurementMap.constant(Fraction(1)), 2) == 1
    assert measurement(f, g, MeasurementMap.constant(INFINITY), 2) is INFINITY


def test_disjoint_carriers_have_no_cycles():
    f = graphing([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(1))],
                 (0, 1))
    g = graphing([Edge(Fraction(1), ms(cellbox(5)), Realizer.shift_by(1))],
                 (5, 6))
    assert cycles(f, g, max_len=6) == []
    assert measurement(f, g, MeasurementMap.constant(Fraction(1))) == 0


def test_machine_word_runs_are_acyclic():
    from graphvm.encodings import encode_machine, encode_word
    from graphvm.machines import parse_machine
    ones = parse_machine("""
name: ones
alphabet: 0 1
heads: 1
states: s0
mode: det
twoway: true
s0, * -> reject
s0, 0 -> advance goto s0
s0, 1 -> accept
""")
    m = encode_machine(ones)
    for word in ("0", "11", "01"):
        enc = encode_word(word, m.layout)
        assert cycles(m.graphing, enc.graphing, max_len=6) == []


def test_measurement_monotone_in_cycle_length():
    A, B = ms(cellbox(0)), ms(cellbox(1))
    carrier = A.union(B)
    f = Graphing.make(TRIVIAL, Microcosm.m1(), carrier,
                      [Edge(Fraction(1), A, Realizer.shift_by(1))])
    g = Graphing.make(TRIVIAL, Microcosm.m1(), carrier,
                      [Edge(Fraction(1), B, Realizer.shift_by(-1))])
    m = MeasurementMap.constant(Fraction(1))
    values = [measurement(f, g, m, k) for k in (2, 4, 6)]
    assert values == sorted(values)


def test_measurement_symmetric_in_arguments():
    for seed in range(8):
        f, g = random_pair(seed, "det")
        m = MeasurementMap.constant(Fraction(1))
        assert measurement(f, g, m, 6) == measurement(g, f, m, 6)


def test_unit_loop_with_branch_keeps_verdict_exact():
    # inside the cut: 5 -> 6 -> 5 unit loop, but 6 also exits to 9
    f = graphing([Edge(Fraction(1), ms(cellbox(0)), Realizer.shift_by(5)),
                  Edge(Fraction(1), ms(cellbox(6)), Realizer.shift_by(-1)),
                  Edge(Fraction(1), ms(cellbox(6)), Realizer.shift_by(3))],
                 (0, 5, 6, 9))
    g = graphing([Edge(Fraction(1), ms(cellbox(5)), Realizer.shift_by(1))],
                 (5, 6))
    result = plug(f, g, cut=ms(cellbox(5), cellbox(6)))
    assert result.diagnostics.complete
    assert result.diagnostics.unresolved_mass == 0
    assert result.diagnostics.looping_mass > 0
    # the exit through cell 9 is found exactly once
    exits = [e for e in result.graphing.edges
             if list(e.target.cells()) == [9]]
    assert len(exits) == 1


def test_prob_test_verdicts():
    regions = Regions(ms(cellbox(0)), ms(cellbox(10)), ms(cellbox(11)))
    half = graphing([Edge(Fraction(1, 2), ms(cellbox(0)), Realizer.shift_by(5)),
                     Edge(Fraction(1, 2), ms(cellbox(0)), Realizer.shift_by(6))],
                    (0, 5, 6), PROBABILITIES)
    lands = graphing([Edge(Fraction(1), ms(cellbox(5)), Realizer.shift_by(5)),
                      Edge(Fraction(1), ms(cellbox(6)), Realizer.shift_by(5))],
                     (5, 6, 10, 11), PROBABILITIES)
    result = plug(half, lands)
    # half the mass lands in accept, half in reject
    assert accept_mass(result, regions) == Fraction(1, 2)
    assert evaluate_test(result, t_prob(Fraction(1, 2)), regions) \
        is Verdict.REJECT  # strict cutpoint
    assert evaluate_test(result, t_prob(Fraction(1, 3)), regions) \
        is Verdict.ACCEPT
