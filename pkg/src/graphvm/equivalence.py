"""Compilation preorder, generator-word orbits, treeings and cost.

Compilability asks whether a map agrees piecewise, over a finite
partition of its domain, with words in a generator set.  For the
affine-permutation realizers used here two maps agree on a set of
positive measure exactly when their symbolic data coincide, so the
search reduces to covering the target's domain with the domains of
generator words that compose to the same symbol.  Searches are bounded
and three-valued: a negative only means nothing was found within the
bounds.

The cost side builds the canonical treeing of the coordinate-permutation
action: boxes of dyadic ranks, refined wherever prefixes tie, each box
carried by the head swap that moves its rank pattern one step closer to
the sorted one.  Partial sums are exact; the closed-form total of the
full treeing is 1 - 1/i!.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .space import (FULL, MeasurableSet, RationalBox, RationalInterval, ONE,
                    ZERO)
from .realizers import Microcosm, Realizer, standard_generators
from .graphing import Edge, Graphing, TRIVIAL

Constraint = dict[int, RationalInterval]


def _constrain(base: Constraint, j: int,
               interval: RationalInterval) -> Constraint | None:
    got = base.get(j, FULL).intersect(interval)
    if got is None:
        return None
    out = dict(base)
    out[j] = got
    return out


def _pull_back(prefix: Realizer, constraints: Constraint) -> Constraint | None:
    """Express constraints on the image of ``prefix`` in source terms."""
    out: Constraint = {}
    for j, interval in constraints.items():
        lo = interval.lo - prefix.offset_at(j)
        hi = interval.hi - prefix.offset_at(j)
        lo, hi = max(lo, ZERO), min(hi, ONE)
        if lo >= hi:
            return None
        got = _constrain(out, prefix.perm_preimage(j), RationalInterval(lo, hi))
        if got is None:
            return None
        out = got
    return out


def _merge(a: Constraint, b: Constraint) -> Constraint | None:
    out = dict(a)
    for j, interval in b.items():
        merged = _constrain(out, j, interval)
        if merged is None:
            return None
        out = merged
    return out


def _constraint_key(c: Constraint):
    return tuple(sorted((j, iv.lo, iv.hi) for j, iv in c.items()))


def constraint_set(c: Constraint, cell: int = 0) -> MeasurableSet:
    return MeasurableSet.of(RationalBox.make(cell, c))


@dataclass(frozen=True)
class PhiWord:
    """A composite of generators and (optionally) their inverses, with
    the exact domain the composition survives on."""

    letters: tuple[tuple[int, int], ...]   # (generator index, +1 or -1)
    realizer: Realizer
    domain: tuple[tuple[int, RationalInterval], ...]

    @property
    def domain_constraints(self) -> Constraint:
        return dict(self.domain)


def _word_states(generators, k: int, positive_only: bool):
    """Breadth-first words up to length k with their composites and
    stepwise domains, deduplicated by (composite, domain)."""
    letters = [(idx, 1, g) for idx, g in enumerate(generators)]
    if not positive_only:
        letters += [(idx, -1, g.invert()) for idx, g in enumerate(generators)]
    start = ((), Realizer.identity(), {})
    seen = {(Realizer.identity().key(), ())}
    frontier = [start]
    yield start
    for _ in range(k):
        nxt = []
        for word, comp, dom in frontier:
            for idx, exp, g in letters:
                constraints = g.input_constraints()
                if constraints is None:
                    continue
                pulled = _pull_back(comp, constraints)
                if pulled is None:
                    continue
                new_dom = _merge(dom, pulled)
                if new_dom is None:
                    continue
                new_comp = comp.compose(g)
                state = (word + ((idx, exp),), new_comp, new_dom)
                key = (new_comp.key(), _constraint_key(new_dom))
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(state)
                yield state
        frontier = nxt


def phi_words(generators, k: int, positive_only: bool = False) -> list[PhiWord]:
    """All distinct partial maps realized by generator words of length
    <= k with nonempty domain (the empty word always included)."""
    out = []
    for word, comp, dom in _word_states(list(generators), k, positive_only):
        out.append(PhiWord(word, comp,
                           tuple(sorted(dom.items()))))
    return out


def orbit(cell: int, values: dict[int, Fraction], generators,
          k: int, positive_only: bool = False) -> list:
    """Points reachable from (cell, values) by generator words of length
    <= k; with inverses this samples the orbit equivalence, positive
    words sample the reachability preorder."""
    gens = list(generators)
    steps = gens if positive_only else gens + [g.invert() for g in gens]
    start = (cell, tuple(sorted((j, v) for j, v in values.items() if v != 0)))
    seen = {start}
    frontier = [start]
    for _ in range(k):
        nxt = []
        for c, items in frontier:
            for g in steps:
                image = g.apply_point(c, dict(items))
                if image is None:
                    continue
                point = (image[0], tuple(sorted(image[1].items())))
                if point not in seen:
                    seen.add(point)
                    nxt.append(point)
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class WitnessPiece:
    part: MeasurableSet                 # cell-free constraints, kept at cell 0
    word: tuple[Realizer, ...]
    composite: Realizer


@dataclass(frozen=True)
class CompilationWitness:
    target: Realizer
    pieces: tuple[WitnessPiece, ...]


def _restrict_to_part(source: MeasurableSet, part: MeasurableSet) -> MeasurableSet:
    """Intersect a real source set with cell-free coordinate constraints."""
    out = []
    for sb in source.boxes:
        for pb in part.boxes:
            coords = sb.coord_map
            ok = True
            for j, iv in pb.coords:
                got = coords.get(j, FULL).intersect(iv)
                if got is None:
                    ok = False
                    break
                coords[j] = got
            if ok:
                out.append(RationalBox.make(sb.cell, coords))
    return MeasurableSet.from_boxes(out)


def is_compilable(target: Realizer, generators, max_word_len: int = 6,
                  max_parts: int = 8) -> CompilationWitness | None:
    """Search for a finite partition of the target's domain on which
    generator words realize the same map.  None means nothing was found
    within the bounds, not that no witness exists."""
    target_constraints = target.input_constraints()
    if target_constraints is None:
        raise ValueError("target realizer is void")
    remaining = constraint_set(target_constraints)
    gens = list(generators)
    pieces: list[WitnessPiece] = []
    for word, comp, dom in _word_states(gens, max_word_len, True):
        if comp != target:
            continue
        part = remaining.intersect(constraint_set(dom))
        if part.is_empty():
            continue
        pieces.append(WitnessPiece(
            part, tuple(gens[idx] if exp == 1 else gens[idx].invert()
                        for idx, exp in word), comp))
        remaining = remaining.subtract(part)
        if remaining.is_empty():
            break
    if not remaining.is_empty() or len(pieces) > max_parts or not pieces:
        return None
    return CompilationWitness(target, tuple(pieces))


class WitnessError(ValueError):
    pass


def _check_witness(edge_index: int, edge: Edge, witness: CompilationWitness):
    if witness.target != edge.realizer:
        raise WitnessError(f"edge {edge_index}: witness target differs "
                           f"from the edge realizer")
    covered = MeasurableSet.empty()
    for part_index, piece in enumerate(witness.pieces):
        comp = Realizer.identity()
        for letter in piece.word:
            comp = comp.compose(letter)
        if comp != edge.realizer:
            raise WitnessError(f"edge {edge_index}, part {part_index}: "
                               f"word composes to a different map")
        covered = covered.union(_restrict_to_part(edge.source, piece.part))
    if covered != edge.source:
        raise WitnessError(f"edge {edge_index}: parts do not cover the source")


def compile_graphing(g: Graphing, witnesses: dict[int, CompilationWitness],
                     target_microcosm: Microcosm) -> Graphing:
    """Replace each edge by one edge per witness part, realized by the
    part's generator word; the partial map of every edge is unchanged,
    so executions and cost are preserved."""
    new_edges = []
    for idx, edge in enumerate(g.edges):
        witness = witnesses.get(idx)
        if witness is None:
            new_edges.append(edge)
            continue
        _check_witness(idx, edge, witness)
        for piece in witness.pieces:
            source = _restrict_to_part(edge.source, piece.part)
            if source.is_empty():
                continue
            new_edges.append(Edge(edge.weight, source, piece.composite))
    return Graphing.make(g.weights, target_microcosm, g.carrier, new_edges)


def unit_shift_witnesses(g: Graphing, max_parts: int = 8) -> dict[int, CompilationWitness]:
    """Witnesses decomposing every pure-shift edge into unit shifts."""
    out = {}
    gens = [Realizer.shift_by(1), Realizer.shift_by(-1)]
    for idx, edge in enumerate(g.edges):
        r = edge.realizer
        if r.perm or r.offsets:
            raise WitnessError(f"edge {idx}: not a pure shift")
        witness = is_compilable(r, gens, max_word_len=max(1, abs(r.shift)),
                                max_parts=max_parts)
        if witness is None:
            raise WitnessError(f"edge {idx}: no unit-shift decomposition")
        out[idx] = witness
    return out


# -- treeings and cost --------------------------------------------------------

@lru_cache(maxsize=None)
def _group_splits(size: int) -> tuple[tuple[Fraction, tuple[int, ...]], ...]:
    """Ways one tied group splits on the next bit: probability and the
    surviving tied subgroup sizes."""
    out = []
    for left in range(size + 1):
        prob = Fraction(comb(size, left), 2 ** size)
        survivors = tuple(s for s in (left, size - left) if s >= 2)
        out.append((prob, survivors))
    return tuple(out)


@lru_cache(maxsize=None)
def _untie_probability(groups: tuple[int, ...], levels: int) -> Fraction:
    """Probability that every tied group separates within ``levels``
    further dyadic bits."""
    if not groups:
        return Fraction(1)
    if levels == 0:
        return Fraction(0)
    total = Fraction(0)
    options = [_group_splits(size) for size in groups]
    for combo in itertools.product(*options):
        prob = Fraction(1)
        merged: list[int] = []
        for p, survivors in combo:
            prob *= p
            merged.extend(survivors)
        total += prob * _untie_probability(tuple(sorted(merged)), levels - 1)
    return total


def treeing_cost(i: int, depth: int) -> tuple[Fraction, Fraction]:
    """(partial sum up to dyadic depth, closed-form total) of the cost
    of the treeing of the i-coordinate permutation action."""
    if i < 2:
        raise ValueError("need at least two coordinates to permute")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    total = 1 - Fraction(1, factorial(i))
    decided = _untie_probability((i,), depth)
    partial = total * decided
    return partial, total


def _swap_parents(i: int) -> dict[tuple[int, ...], int]:
    """Breadth-first spanning tree of the permutations of 1..i under the
    head swaps: maps each non-identity ranking to the swap index moving
    it one step closer to sorted."""
    identity = tuple(range(1, i + 1))
    parents: dict[tuple[int, ...], int] = {}
    frontier = [identity]
    seen = {identity}
    while frontier:
        nxt = []
        for sigma in frontier:
            for j in range(2, i + 1):
                # left multiplication by the swap (1 j)
                child = tuple(1 if v == j else j if v == 1 else v
                              for v in sigma)
                if child not in seen:
                    seen.add(child)
                    parents[child] = j
                    nxt.append(child)
        frontier = nxt
    return parents


def build_treeing(i: int, depth: int, cell: int = 0) -> Graphing:
    """Explicit truncated treeing as a graphing: one edge per
    non-sorted ranking, sourced on the dyadic boxes decided within
    ``depth`` bits.  Its cost equals the partial sum of
    :func:`treeing_cost`."""
    if i < 2:
        raise ValueError("need at least two coordinates to permute")
    parents = _swap_parents(i)
    sources: dict[tuple[int, ...], list[RationalBox]] = {
        sigma: [] for sigma in parents}

    def refine(intervals: dict[int, RationalInterval], level: int):
        groups: dict[tuple[Fraction, Fraction], list[int]] = {}
        for j, iv in intervals.items():
            groups.setdefault((iv.lo, iv.hi), []).append(j)
        tied = [g for g in groups.values() if len(g) >= 2]
        if not tied:
            order = tuple(j for _, j in sorted(
                (intervals[j].lo, j) for j in intervals))
            if order in parents:
                sources[order].append(RationalBox.make(cell, intervals))
            return
        if level >= depth:
            return
        flat = [j for g in tied for j in g]
        for bits in itertools.product((0, 1), repeat=len(flat)):
            split = dict(intervals)
            for j, bit in zip(flat, bits):
                iv = intervals[j]
                mid = (iv.lo + iv.hi) / 2
                split[j] = RationalInterval(iv.lo, mid) if bit == 0 \
                    else RationalInterval(mid, iv.hi)
            refine(split, level + 1)

    refine({j: FULL for j in range(1, i + 1)}, 0)
    edges = []
    for sigma in sorted(parents):
        boxes = sources[sigma]
        if boxes:
            edges.append(Edge(Fraction(1), MeasurableSet.from_boxes(boxes),
                              Realizer.head_swap(parents[sigma])))
    carrier = MeasurableSet.of(RationalBox.make(cell))
    return Graphing.make(TRIVIAL, Microcosm.mi(i), carrier, edges)


def separation_experiment(i: int, j: int, max_word_len: int = 6,
                          max_parts: int = 8) -> dict:
    """Bounded consistency check that the microcosms of i and j heads
    are not compilation-equivalent: their treeings have distinct fixed
    costs and the extra head swap resists compilation into the smaller
    generator set within the bounds."""
    if not (2 <= i < j):
        raise ValueError("need 2 <= i < j")
    total_i = treeing_cost(i, 0)[1]
    total_j = treeing_cost(j, 0)[1]
    witness = is_compilable(Realizer.head_swap(j), standard_generators(i),
                            max_word_len, max_parts)
    return {
        "pair": (i, j),
        "treeing_total_small": total_i,
        "treeing_total_large": total_j,
        "totals_distinct": total_i != total_j,
        "swap_noncompilable_within_bounds": witness is None,
        "max_word_len": max_word_len,
        "max_parts": max_parts,
        "note": ("bounded consistency check, not a proof: the negative "
                 "holds only within the stated search bounds"),
    }
