"""Exact measurable sets over the space Z x [0,1]^N.

A point has one integer cell coordinate and a sequence of cube
coordinates indexed by positive integers, almost all of which are
irrelevant.  A measurable set is kept as a finite union of boxes; each
box fixes one cell and constrains finitely many cube coordinates to
half-open rational intervals [lo, hi).  The measure is counting measure
on cells times Lebesgue measure on the cube, so a box has measure equal
to the product of its constrained interval lengths.

Everything here is immutable and exact: endpoints are
``fractions.Fraction`` and set operations never approximate.  Half-open
intervals make finite partitions exact rather than almost-everywhere,
so emptiness checks replace null-measure conditions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class RationalInterval:
    """Half-open interval [lo, hi) with 0 <= lo < hi <= 1."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (ZERO <= self.lo < self.hi <= ONE):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi})")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def intersect(self, other: "RationalInterval") -> "RationalInterval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return RationalInterval(lo, hi) if lo < hi else None

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x < self.hi

    def covers(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi})"


FULL = RationalInterval(ZERO, ONE)


def interval(lo, hi) -> RationalInterval:
    return RationalInterval(Fraction(lo), Fraction(hi))


@dataclass(frozen=True)
class RationalBox:
    """One cell of Z with finitely many constrained cube coordinates.

    ``coords`` maps coordinate index (positive integer) to an interval;
    unmentioned coordinates span the full [0, 1).  Full constraints are
    normalised away so structural equality matches point-set equality
    for single boxes.
    """

    cell: int
    coords: tuple[tuple[int, RationalInterval], ...]

    @staticmethod
    def make(cell: int, coords: Mapping[int, RationalInterval] | None = None) -> "RationalBox":
        items = []
        for j, iv in sorted((coords or {}).items()):
            if j < 1:
                raise ValueError(f"coordinate index must be positive, got {j}")
            if iv != FULL:
                items.append((j, iv))
        return RationalBox(cell, tuple(items))

    @property
    def coord_map(self) -> dict[int, RationalInterval]:
        return dict(self.coords)

    def interval_at(self, j: int) -> RationalInterval:
        for idx, iv in self.coords:
            if idx == j:
                return iv
        return FULL

    def measure(self) -> Fraction:
        m = ONE
        for _, iv in self.coords:
            m *= iv.length
        return m

    def intersect(self, other: "RationalBox") -> "RationalBox | None":
        if self.cell != other.cell:
            return None
        coords: dict[int, RationalInterval] = dict(self.coords)
        for j, iv in other.coords:
            got = coords.get(j, FULL).intersect(iv)
            if got is None:
                return None
            coords[j] = got
        return RationalBox.make(self.cell, coords)

    def contains_point(self, cell: int, values: Mapping[int, Fraction]) -> bool:
        if cell != self.cell:
            return False
        return all(iv.contains(values.get(j, ZERO)) for j, iv in self.coords)

    def key(self):
        return (self.cell, tuple((j, iv.lo, iv.hi) for j, iv in self.coords))

    def __str__(self) -> str:
        inner = ", ".join(f"x{j} in {iv}" for j, iv in self.coords)
        return f"{{cell {self.cell}" + (f": {inner}}}" if inner else "}")


def box(cell: int, coords: Mapping[int, RationalInterval] | None = None) -> RationalBox:
    return RationalBox.make(cell, coords)


def _subtract_box(a: RationalBox, b: RationalBox) -> list[RationalBox]:
    """a minus b as disjoint boxes (not canonicalised)."""
    if a.intersect(b) is None:
        return [a]
    pieces: list[RationalBox] = []
    remaining = a.coord_map
    axes = sorted(set(remaining) | {j for j, _ in b.coords})
    for j in axes:
        cur = remaining.get(j, FULL)
        cut = b.interval_at(j)
        if cur.lo < cut.lo:
            left = dict(remaining)
            left[j] = RationalInterval(cur.lo, cut.lo)
            pieces.append(RationalBox.make(a.cell, left))
        if cut.hi < cur.hi:
            right = dict(remaining)
            right[j] = RationalInterval(cut.hi, cur.hi)
            pieces.append(RationalBox.make(a.cell, right))
        overlap = cur.intersect(cut)
        assert overlap is not None
        remaining[j] = overlap
    return pieces


# -- canonical form ---------------------------------------------------------
#
# Canonicalisation recurses over the constrained coordinates in fixed
# ascending order: slice the first coordinate at every endpoint, canonicalise
# each slice over the remaining coordinates, and merge adjacent slices whose
# canonical content coincides.  The outcome depends only on the point set, so
# point-set-equal inputs produce identical tuples of boxes.

_CoordMap = tuple[tuple[int, RationalInterval], ...]


def _canon_group(items: list[dict[int, RationalInterval]],
                 axes: list[int]) -> list[_CoordMap]:
    if not items:
        return []
    if not axes:
        return [()]
    j, rest = axes[0], axes[1:]
    points = {ZERO, ONE}
    for item in items:
        iv = item.get(j, FULL)
        points.add(iv.lo)
        points.add(iv.hi)
    cuts = sorted(points)
    runs: list[list] = []  # [lo, hi, canonical slice]
    for lo, hi in zip(cuts, cuts[1:]):
        piece = RationalInterval(lo, hi)
        sub = [{k: v for k, v in item.items() if k != j}
               for item in items if item.get(j, FULL).covers(piece)]
        content = _canon_group(sub, rest)
        if runs and runs[-1][1] == lo and runs[-1][2] == content:
            runs[-1][1] = hi
        else:
            runs.append([lo, hi, content])
    out: list[_CoordMap] = []
    for lo, hi, content in runs:
        iv = RationalInterval(lo, hi)
        for sub in content:
            if iv == FULL:
                out.append(sub)
            else:
                out.append(tuple(sorted(sub + ((j, iv),))))
    return out


def _canonicalize(boxes: Iterable[RationalBox]) -> tuple[RationalBox, ...]:
    boxes = list(boxes)
    if len(boxes) <= 1:
        return tuple(boxes)  # a single normalised box is its canonical form
    by_cell: dict[int, list[RationalBox]] = {}
    for b in boxes:
        by_cell.setdefault(b.cell, []).append(b)
    out: list[RationalBox] = []
    for cell in sorted(by_cell):
        group = by_cell[cell]
        axes = sorted({j for b in group for j, _ in b.coords})
        for coords in _canon_group([b.coord_map for b in group], axes):
            out.append(RationalBox(cell, coords))
    out.sort(key=RationalBox.key)
    return tuple(out)


@dataclass(frozen=True)
class MeasurableSet:
    """Finite union of pairwise-disjoint boxes in canonical order.

    Construct through :meth:`from_boxes`, which canonicalises; the raw
    constructor trusts its input.  Canonical form is unique per point
    set, so ``==`` is point-set equality.
    """

    boxes: tuple[RationalBox, ...]

    @staticmethod
    def from_boxes(boxes: Iterable[RationalBox]) -> "MeasurableSet":
        return MeasurableSet(_canonicalize(boxes))

    @staticmethod
    def empty() -> "MeasurableSet":
        return _EMPTY

    @staticmethod
    def of(*boxes: RationalBox) -> "MeasurableSet":
        return MeasurableSet.from_boxes(boxes)

    def is_empty(self) -> bool:
        return not self.boxes

    def measure(self) -> Fraction:
        return sum((b.measure() for b in self.boxes), ZERO)

    def intersect(self, other: "MeasurableSet") -> "MeasurableSet":
        hits = []
        theirs_by_cell: dict[int, list[RationalBox]] = {}
        for b in other.boxes:
            theirs_by_cell.setdefault(b.cell, []).append(b)
        for a in self.boxes:
            for b in theirs_by_cell.get(a.cell, ()):
                got = a.intersect(b)
                if got is not None:
                    hits.append(got)
        if len(hits) <= 1:
            return MeasurableSet(tuple(hits))
        return MeasurableSet.from_boxes(hits)

    def union(self, other: "MeasurableSet") -> "MeasurableSet":
        if self.is_empty():
            return other
        if other.is_empty():
            return self
        return MeasurableSet.from_boxes(self.boxes + other.boxes)

    def subtract(self, other: "MeasurableSet") -> "MeasurableSet":
        if self.is_empty() or other.is_empty():
            return self
        pieces = list(self.boxes)
        for b in other.boxes:
            pieces = [p for piece in pieces for p in _subtract_box(piece, b)]
        return MeasurableSet.from_boxes(pieces)

    def subset_of(self, other: "MeasurableSet") -> bool:
        # Exact representation: every nonempty set has positive measure,
        # so inclusion reduces to a measure identity.
        return self.intersect(other).measure() == self.measure()

    def contains_point(self, cell: int, values: Mapping[int, Fraction]) -> bool:
        return any(b.contains_point(cell, values) for b in self.boxes)

    def cells(self) -> set[int]:
        return {b.cell for b in self.boxes}

    def __str__(self) -> str:
        if not self.boxes:
            return "{}"
        return " u ".join(str(b) for b in self.boxes)


_EMPTY = MeasurableSet(())


def measure(s: MeasurableSet) -> Fraction:
    return s.measure()


def intersect(a: MeasurableSet, b: MeasurableSet) -> MeasurableSet:
    return a.intersect(b)


def union(a: MeasurableSet, b: MeasurableSet) -> MeasurableSet:
    return a.union(b)


def subtract(a: MeasurableSet, b: MeasurableSet) -> MeasurableSet:
    return a.subtract(b)


def common_refinement(sets: Sequence[MeasurableSet]) -> list[RationalBox]:
    """Partition the union of ``sets`` so each input is a union of parts.

    Returns plain boxes (a partition, not a canonical set): adjacent
    parts are deliberately left unmerged so every input set is exactly
    a union of whole parts.
    """
    by_cell: dict[int, list[RationalBox]] = {}
    for s in sets:
        for b in s.boxes:
            by_cell.setdefault(b.cell, []).append(b)
    parts: list[RationalBox] = []
    for cell in sorted(by_cell):
        group = by_cell[cell]
        axes = sorted({j for b in group for j, _ in b.coords})
        cuts: dict[int, list[Fraction]] = {}
        for j in axes:
            points = {ZERO, ONE}
            for b in group:
                iv = b.interval_at(j)
                points.add(iv.lo)
                points.add(iv.hi)
            cuts[j] = sorted(points)
        grids = [
            [RationalInterval(lo, hi) for lo, hi in zip(cuts[j], cuts[j][1:])]
            for j in axes
        ]
        for combo in itertools.product(*grids) if axes else [()]:
            candidate = RationalBox.make(cell, dict(zip(axes, combo)))
            if any(all(b.interval_at(j).covers(iv) for j, iv in zip(axes, combo))
                   for b in group):
                parts.append(candidate)
    parts.sort(key=RationalBox.key)
    return parts
