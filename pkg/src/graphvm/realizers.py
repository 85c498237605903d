"""Symbolic partial maps of Z x [0,1]^N and the microcosms that admit them.

A realizer acts on a point (n, x) by permuting finitely many cube
coordinates, adding a rational offset to finitely many of them, and
shifting the cell: the output's coordinate j is ``x[perm^-1(j)] +
offset[j]`` and the cell becomes ``n + shift``.  The map is defined
exactly where every offset keeps its coordinate inside [0, 1); on that
domain it is invertible and measure-preserving.

The fixed order of action (permute, then offset, then shift) makes
composition closed-form, so membership in the coordinate-permutation
microcosms is decidable by inspection rather than word search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .space import (FULL, MeasurableSet, RationalBox, RationalInterval, ZERO,
                    ONE)


class DomainViolation(ValueError):
    """A realizer was applied outside its domain."""

    def __init__(self, box: RationalBox, coordinate: int):
        self.box = box
        self.coordinate = coordinate
        super().__init__(
            f"realizer undefined on {box}: coordinate {coordinate} leaves [0,1)")


def _normalize_perm(perm: dict[int, int]) -> tuple[tuple[int, int], ...]:
    moved = {j: k for j, k in perm.items() if j != k}
    if sorted(moved) != sorted(moved.values()):
        raise ValueError(f"not a permutation: {perm}")
    if any(j < 1 for j in moved):
        raise ValueError("permutation must move positive coordinates only")
    return tuple(sorted(moved.items()))


@dataclass(frozen=True)
class Realizer:
    shift: int
    perm: tuple[tuple[int, int], ...] = ()
    offsets: tuple[tuple[int, Fraction], ...] = ()

    @staticmethod
    def make(shift: int = 0,
             perm: dict[int, int] | None = None,
             offsets: dict[int, Fraction] | None = None) -> "Realizer":
        norm_off = tuple(sorted(
            (j, Fraction(c)) for j, c in (offsets or {}).items()
            if Fraction(c) != 0))
        if any(j < 1 for j, _ in norm_off):
            raise ValueError("offsets apply to positive coordinates only")
        return Realizer(shift, _normalize_perm(perm or {}), norm_off)

    @staticmethod
    def identity() -> "Realizer":
        return _IDENTITY

    @staticmethod
    def shift_by(k: int) -> "Realizer":
        return Realizer(k)

    @staticmethod
    def transposition(a: int, b: int) -> "Realizer":
        if a == b:
            return _IDENTITY
        return Realizer.make(0, {a: b, b: a})

    @staticmethod
    def head_swap(j: int) -> "Realizer":
        """The coordinate swap activating head j (the map exchanging 1 and j)."""
        return Realizer.transposition(1, j)

    @staticmethod
    def offset(coords: dict[int, Fraction]) -> "Realizer":
        return Realizer.make(0, None, coords)

    @cached_property
    def _perm_map(self) -> dict[int, int]:
        return dict(self.perm)

    @cached_property
    def _perm_inv(self) -> dict[int, int]:
        return {k: j for j, k in self.perm}

    @cached_property
    def _offset_map(self) -> dict[int, Fraction]:
        return dict(self.offsets)

    def perm_image(self, j: int) -> int:
        return self._perm_map.get(j, j)

    def perm_preimage(self, j: int) -> int:
        return self._perm_inv.get(j, j)

    def offset_at(self, j: int) -> Fraction:
        return self._offset_map.get(j, ZERO)

    def is_identity(self) -> bool:
        return self.shift == 0 and not self.perm and not self.offsets

    def moved_coordinates(self) -> set[int]:
        return {j for j, _ in self.perm} | {j for j, _ in self.offsets}

    def input_constraints(self) -> dict[int, RationalInterval] | None:
        """Per input coordinate, the interval on which the map is defined.

        Returns None when the map is void (an offset of magnitude >= 1
        leaves no admissible inputs; such composites arise in word
        searches and are dropped there).
        """
        out: dict[int, RationalInterval] = {}
        for j, c in self.offsets:
            i = self.perm_preimage(j)
            lo = max(ZERO, -c)
            hi = min(ONE, ONE - c)
            if lo >= hi:
                return None
            out[i] = RationalInterval(lo, hi)
        return out

    def is_void(self) -> bool:
        return self.input_constraints() is None

    def apply_box(self, b: RationalBox) -> RationalBox:
        coords: dict[int, RationalInterval] = {}
        touched = {self.perm_image(j) for j, _ in b.coords}
        touched.update(j for j, _ in self.offsets)
        for j in touched:
            src = b.interval_at(self.perm_preimage(j))
            c = self._offset_map.get(j, ZERO)
            lo, hi = src.lo + c, src.hi + c
            if lo < 0 or hi > 1:
                raise DomainViolation(b, self.perm_preimage(j))
            coords[j] = RationalInterval(lo, hi)
        return RationalBox.make(b.cell + self.shift, coords)

    def apply(self, s: MeasurableSet) -> MeasurableSet:
        return MeasurableSet.from_boxes(self.apply_box(b) for b in s.boxes)

    def apply_point(self, cell: int, values: dict[int, Fraction]):
        """Image of a point, or None when outside the domain."""
        out: dict[int, Fraction] = {}
        touched = {self.perm_image(j) for j in values}
        touched.update(j for j, _ in self.offsets)
        for j in touched:
            v = values.get(self.perm_preimage(j), ZERO) + self._offset_map.get(j, ZERO)
            if not (ZERO <= v < ONE):
                return None
            if v != 0:
                out[j] = v
        return (cell + self.shift, out)

    def domain_within(self, within: MeasurableSet) -> MeasurableSet:
        constraints = self.input_constraints()
        if constraints is None:
            return MeasurableSet.empty()
        if not constraints:
            return within
        kept = []
        for b in within.boxes:
            coords = b.coord_map
            ok = True
            for j, iv in constraints.items():
                got = coords.get(j, FULL).intersect(iv)
                if got is None:
                    ok = False
                    break
                coords[j] = got
            if ok:
                kept.append(RationalBox.make(b.cell, coords))
        return MeasurableSet.from_boxes(kept)

    def compose(self, then: "Realizer") -> "Realizer":
        """The map acting as ``then`` after ``self``."""
        support = ({j for j, _ in self.perm} | {j for j, _ in then.perm}
                   | {k for _, k in self.perm} | {k for _, k in then.perm})
        perm = {j: then.perm_image(self.perm_image(j)) for j in support}
        offs: dict[int, Fraction] = {}
        touched = {j for j, _ in then.offsets}
        touched.update(then.perm_image(j) for j, _ in self.offsets)
        for j in touched:
            c = self._offset_map.get(then.perm_preimage(j), ZERO) \
                + then._offset_map.get(j, ZERO)
            if c != 0:
                offs[j] = c
        return Realizer.make(self.shift + then.shift, perm, offs)

    def invert(self) -> "Realizer":
        perm = {k: j for j, k in self.perm}
        offs = {j: -self._offset_map[self.perm_image(j)]
                for j in (self.perm_preimage(k) for k, _ in self.offsets)}
        return Realizer.make(-self.shift, perm, offs)

    def key(self):
        return (self.shift, self.perm,
                tuple((j, c.numerator, c.denominator) for j, c in self.offsets))

    def text(self) -> str:
        """Stable textual form: ``shift=k; perm=(a b)...; offsets=j:p/q,...``"""
        parts = [f"shift={self.shift}"]
        if self.perm:
            cycles = []
            seen: set[int] = set()
            pm = self._perm_map
            for start in sorted(pm):
                if start in seen:
                    continue
                cyc = [start]
                seen.add(start)
                nxt = pm[start]
                while nxt != start:
                    cyc.append(nxt)
                    seen.add(nxt)
                    nxt = pm[nxt]
                if len(cyc) > 1:
                    cycles.append("(" + " ".join(map(str, cyc)) + ")")
            parts.append("perm=" + "".join(cycles))
        if self.offsets:
            parts.append("offsets=" + ",".join(
                f"{j}:{c.numerator}/{c.denominator}" for j, c in self.offsets))
        return "; ".join(parts)

    def __str__(self) -> str:
        return self.text()


_IDENTITY = Realizer(0)


def compose(r1: Realizer, r2: Realizer) -> Realizer:
    """Composite applying r1 first, then r2."""
    return r1.compose(r2)


def invert(r: Realizer) -> Realizer:
    return r.invert()


def apply(r: Realizer, s: MeasurableSet) -> MeasurableSet:
    return r.apply(s)


def domain_of(r: Realizer, within: MeasurableSet) -> MeasurableSet:
    return r.domain_within(within)


def preimage_within(r: Realizer, source: MeasurableSet,
                    target: MeasurableSet) -> MeasurableSet:
    """Subset of ``source`` that r maps into ``target``."""
    src = r.domain_within(source)
    if src.is_empty():
        return src
    image = r.apply(src)
    hit = image.intersect(target)
    if hit.is_empty():
        return hit
    return r.invert().apply(hit)


# -- microcosms --------------------------------------------------------------

_KIND_ORDER = {"m1": 0, "mi": 1, "minf": 2, "macro": 3}


@dataclass(frozen=True)
class Microcosm:
    """A composition-closed family of realizers, named or finitely generated.

    The named families: translations only (m1); translations plus
    permutations of the first i coordinates (mi); translations plus all
    finite-support permutations (minf); everything (macro).  A finitely
    generated microcosm decides membership by bounded word search.
    """

    kind: str
    arity: int = 0
    generators: tuple[Realizer, ...] = field(default=())

    @staticmethod
    def m1() -> "Microcosm":
        return Microcosm("m1")

    @staticmethod
    def mi(i: int) -> "Microcosm":
        if i < 1:
            raise ValueError("arity must be at least 1")
        return Microcosm("m1") if i == 1 else Microcosm("mi", i)

    @staticmethod
    def m_infinity() -> "Microcosm":
        return Microcosm("minf")

    @staticmethod
    def macrocosm() -> "Microcosm":
        return Microcosm("macro")

    @staticmethod
    def finitely_generated(generators) -> "Microcosm":
        gens = tuple(sorted(set(generators), key=Realizer.key))
        return Microcosm("fingen", 0, gens)

    def contains(self, r: Realizer, word_bound: int = 16) -> bool:
        if self.kind == "macro":
            return True
        if self.kind == "minf":
            return not r.offsets
        if self.kind == "m1":
            return not r.offsets and not r.perm
        if self.kind == "mi":
            return not r.offsets and all(
                j <= self.arity and k <= self.arity for j, k in r.perm)
        return self.membership_witness(r, word_bound) is not None

    def membership_witness(self, r: Realizer,
                           word_bound: int = 16) -> list[Realizer] | None:
        """For a finitely generated microcosm: a generator word composing
        to r, searched breadth-first up to ``word_bound`` letters.  None
        means not found within the bound, not a definite negative."""
        if self.kind != "fingen":
            return [r] if self.contains(r) else None
        if r.is_identity():
            return []
        frontier: list[tuple[Realizer, list[Realizer]]] = [(Realizer.identity(), [])]
        seen = {Realizer.identity().key()}
        for _ in range(word_bound):
            nxt = []
            for cur, word in frontier:
                for g in self.generators:
                    cand = cur.compose(g)
                    if cand.is_void():
                        continue
                    k = cand.key()
                    if k in seen:
                        continue
                    seen.add(k)
                    if cand == r:
                        return word + [g]
                    nxt.append((cand, word + [g]))
            frontier = nxt
        return None

    def join(self, other: "Microcosm") -> "Microcosm":
        """Smallest named family containing both, widening when mixing a
        finitely generated microcosm with an infinite named one."""
        a, b = self, other
        if a == b:
            return a
        if "macro" in (a.kind, b.kind):
            return Microcosm.macrocosm()
        if a.kind == "fingen" and b.kind == "fingen":
            return Microcosm.finitely_generated(a.generators + b.generators)
        if "fingen" in (a.kind, b.kind):
            fg = a if a.kind == "fingen" else b
            named = b if a.kind == "fingen" else a
            if named.kind == "minf":
                if all(not g.offsets for g in fg.generators):
                    return named
                return Microcosm.macrocosm()
            return Microcosm.finitely_generated(
                fg.generators + tuple(standard_generators(
                    named.arity if named.kind == "mi" else 1)))
        return a if _KIND_ORDER[a.kind] >= _KIND_ORDER[b.kind] else b

    def describe(self) -> str:
        if self.kind == "mi":
            return f"mi({self.arity})"
        if self.kind == "fingen":
            return f"fingen[{len(self.generators)}]"
        return self.kind


def in_microcosm(r: Realizer, m: Microcosm, word_bound: int = 16) -> bool:
    return m.contains(r, word_bound)


def standard_generators(i: int) -> list[Realizer]:
    """Unit translations plus the head swaps up to coordinate i."""
    gens = [Realizer.shift_by(1), Realizer.shift_by(-1)]
    gens.extend(Realizer.head_swap(j) for j in range(2, i + 1))
    return gens
