"""Seeded random graphings for the closure and associativity checks.

The generated instances are layered: every realizer strictly increases
the cell index, so alternating paths always terminate and diagnostics
stay clean, which is what the closure and associativity statements
assume.  Sources are dyadic boxes, offsets dyadic rationals, and a
transposition is thrown in now and then so permutation realizers get
exercised too.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .space import MeasurableSet, RationalBox, RationalInterval
from .realizers import Microcosm, Realizer
from .graphing import Edge, Graphing, PROBABILITIES, TRIVIAL


def _dyadic_interval(rng: random.Random, denominator: int = 8) -> RationalInterval:
    lo = rng.randrange(0, denominator - 1)
    hi = rng.randrange(lo + 1, denominator)
    return RationalInterval(Fraction(lo, denominator), Fraction(hi, denominator))


def _disjoint_intervals(rng: random.Random, count: int,
                        denominator: int = 8) -> list[RationalInterval]:
    cuts = sorted(rng.sample(range(denominator + 1), count + 1))
    return [RationalInterval(Fraction(a, denominator), Fraction(b, denominator))
            for a, b in zip(cuts, cuts[1:])]


def _random_realizer(rng: random.Random, src_cell: int, dst_cell: int,
                     source_interval: RationalInterval) -> Realizer:
    """A realizer from src_cell to dst_cell whose domain covers the
    given coordinate-1 interval."""
    perm = {1: 2, 2: 1} if rng.randrange(4) == 0 else None
    coord = 2 if perm else 1  # either way the constraint lands on input 1
    if rng.randrange(2) == 0:
        room_up = 1 - source_interval.hi
        room_down = source_interval.lo
        choices = [Fraction(k, 8) for k in range(-8, 9)
                   if k != 0 and -room_down <= Fraction(k, 8) <= room_up]
        offsets = {coord: rng.choice(choices)} if choices else None
    else:
        offsets = None
    return Realizer.make(dst_cell - src_cell, perm, offsets)


def _layered_graphing(rng: random.Random, left_cells, right_cells,
                      mode: str) -> Graphing:
    """Edges from the left layer into the right layer, plus a few inside
    the right layer, all strictly increasing in cell index."""
    edges = []
    for src in left_cells:
        intervals = _disjoint_intervals(rng, rng.randrange(1, 3))
        for iv in intervals:
            dst = rng.choice(right_cells)
            _emit(rng, edges, src, dst, iv, mode)
    for src in right_cells[:-1]:
        if rng.randrange(2) == 0:
            iv = _dyadic_interval(rng)
            dst = rng.choice([c for c in right_cells if c > src])
            _emit(rng, edges, src, dst, iv, mode)
    carrier = MeasurableSet.from_boxes(
        [RationalBox.make(c) for c in list(left_cells) + list(right_cells)])
    monoid = PROBABILITIES if mode == "prob" else TRIVIAL
    return Graphing.make(monoid, Microcosm.macrocosm(), carrier, edges)


def _emit(rng, edges, src, dst, iv, mode):
    source = MeasurableSet.of(RationalBox.make(src, {1: iv}))
    realizer = _random_realizer(rng, src, dst, iv)
    if realizer.domain_within(source) != source:
        realizer = Realizer.shift_by(dst - src)
    if mode == "det":
        edges.append(Edge(Fraction(1), source, realizer))
    elif mode == "nondet":
        edges.append(Edge(Fraction(1), source, realizer))
        if rng.randrange(2) == 0:
            other = Realizer.shift_by(dst - src)
            edges.append(Edge(Fraction(1), source, other))
    else:
        split = Fraction(rng.randrange(1, 4), 4)
        edges.append(Edge(split, source, realizer))
        edges.append(Edge(1 - split, source, Realizer.shift_by(dst - src)))


def random_pair(seed: int, mode: str) -> tuple[Graphing, Graphing]:
    """Two layered graphings sharing a middle region: their default cut."""
    rng = random.Random(seed)
    left = [0, 1]
    middle = [10, 11, 12]
    right = [20, 21]
    f = _layered_graphing(rng, left, middle, mode)
    g = _layered_graphing(rng, middle, right, mode)
    return f, g


def random_triple(seed: int, mode: str = "det"):
    """Three layered graphings chained through two disjoint cuts; the
    outer carriers never meet, as associativity requires."""
    rng = random.Random(seed)
    a = [0, 1]
    b = [10, 11, 12]
    c = [20, 21, 22]
    d = [30, 31]
    f = _layered_graphing(rng, a, b, mode)
    g = _layered_graphing(rng, b, c, mode)
    h = _layered_graphing(rng, c, d, mode)
    return f, g, h
