"""Execution of graphings: alternating-path composition across a cut,
alternating cycles, cycle measurements, and test-based acceptance.

Plugging two graphings composes every maximal path that alternates
between their edges, starts outside the cut region and ends outside it;
each such path becomes one edge of the result, realized by the exact
composite map on the exact surviving domain.  Paths that die inside the
cut vanish.  The search is breadth-first with exact domain propagation,
a step budget, and a repetition detector, so a verdict is only ever
``undetermined`` when mass remains whose fate the budget could not
settle.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .space import MeasurableSet, RationalBox, _subtract_box
from .realizers import Realizer
from .graphing import Edge, Graphing, join_monoids, validate


class _Infinity:
    """Exact positive infinity for measurement values."""

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = _Infinity()


class Verdict(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Test:
    """Acceptance rule applied to an execution result.

    det/nl accept when some surviving path carries launch mass back into
    the accept cells; conl accepts when no surviving path carries launch
    mass into the reject cells; prob compares the normalised accept mass
    against a strict cutpoint.
    """

    kind: str                       # det | nl | conl | prob
    cutpoint: Fraction = Fraction(1, 2)

    __test__ = False                # not a pytest case, despite the name

    def __post_init__(self):
        if self.kind not in ("det", "nl", "conl", "prob"):
            raise ValueError(f"unknown test kind {self.kind!r}")
        if not (0 <= self.cutpoint < 1):
            raise ValueError("cutpoint must lie in [0, 1)")


T_DET = Test("det")
T_NL = Test("nl")
T_CONL = Test("conl")


def t_prob(cutpoint=Fraction(1, 2)) -> Test:
    return Test("prob", Fraction(cutpoint))


@dataclass(frozen=True)
class Regions:
    """Named regions a test needs: where runs launch from, and the
    accept/reject landing cells."""

    launch: MeasurableSet
    accept: MeasurableSet
    reject: MeasurableSet


@dataclass
class Diagnostics:
    complete: bool = True
    steps_used: int = 0
    unresolved_mass: Fraction = Fraction(0)
    looping_mass: Fraction = Fraction(0)
    dead_mass: Fraction = Fraction(0)
    notes: list[str] = field(default_factory=list)

    def clean(self) -> bool:
        return self.complete and self.unresolved_mass == 0


@dataclass(frozen=True)
class PathRecord:
    """One maximal alternating path: the edge steps taken and the region
    alive just before each step."""

    steps: tuple[tuple[str, int], ...]
    regions: tuple[MeasurableSet, ...]
    source: MeasurableSet
    realizer: Realizer
    weight: Fraction


@dataclass
class PlugResult:
    graphing: Graphing
    paths: list[PathRecord]          # aligned with graphing.edges
    dead_paths: list[PathRecord]     # maximal paths that die inside the cut
    diagnostics: Diagnostics


@dataclass(frozen=True)
class _Piece:
    side: str
    edge_index: int
    weight: Fraction
    source: MeasurableSet
    realizer: Realizer
    src_in_cut: bool


class _CutIndex:
    """Cut region indexed by cell for fast membership splits."""

    def __init__(self, cut: MeasurableSet):
        self.set = cut
        self.by_cell: dict[int, list[RationalBox]] = {}
        for b in cut.boxes:
            self.by_cell.setdefault(b.cell, []).append(b)

    def intersect(self, s: MeasurableSet) -> MeasurableSet:
        hits = []
        for a in s.boxes:
            for b in self.by_cell.get(a.cell, ()):
                got = a.intersect(b)
                if got is not None:
                    hits.append(got)
        if len(hits) <= 1:
            return MeasurableSet(tuple(hits))
        return MeasurableSet.from_boxes(hits)

    def subtract(self, s: MeasurableSet) -> MeasurableSet:
        kept = []
        for a in s.boxes:
            if a.cell not in self.by_cell:
                kept.append(a)
                continue
            pieces = [a]
            for b in self.by_cell[a.cell]:
                pieces = [p for piece in pieces for p in _subtract_box(piece, b)]
            kept.extend(pieces)
        return MeasurableSet.from_boxes(kept)


def _split_pieces(g: Graphing, side: str, cut: _CutIndex) -> list[_Piece]:
    pieces = []
    for idx, e in enumerate(g.edges):
        inside = cut.intersect(e.source)
        outside = e.source.subtract(inside)
        if not inside.is_empty():
            pieces.append(_Piece(side, idx, e.weight, inside, e.realizer, True))
        if not outside.is_empty():
            pieces.append(_Piece(side, idx, e.weight, outside, e.realizer, False))
    return pieces


@dataclass
class _Path:
    side: str
    start: MeasurableSet            # surviving sub-domain of the first source
    composite: Realizer
    image: MeasurableSet
    weight: Fraction
    steps: tuple[tuple[str, int], ...]
    regions: tuple[MeasurableSet, ...]
    visits: dict                    # (side, piece id) -> [(region, composite, weight)]


def plug(f: Graphing, g: Graphing, cut: MeasurableSet | None = None,
         max_steps: int = 10000, validate_inputs: bool = True) -> PlugResult:
    """Compose ``f`` and ``g`` across ``cut`` (their carrier overlap by
    default) into the graphing of maximal alternating paths.

    ``validate_inputs=False`` skips the well-formedness sweep for
    callers that already hold validated graphings.
    """
    if validate_inputs:
        for name, graphing in (("first", f), ("second", g)):
            problems = validate(graphing)
            if problems:
                raise ValueError(f"{name} graphing invalid: {problems}")
    monoid = join_monoids(f.weights, g.weights)
    if cut is None:
        cut = f.carrier.intersect(g.carrier)
    cut_index = _CutIndex(cut)
    sides = {"F": f, "G": g}
    pieces = {side: _split_pieces(graphing, side, cut_index)
              for side, graphing in sides.items()}
    buckets: dict[str, dict[int, list[tuple[int, _Piece]]]] = {}
    for side, plist in pieces.items():
        bucket: dict[int, list[tuple[int, _Piece]]] = {}
        for pid, piece in enumerate(plist):
            if not piece.src_in_cut:
                continue
            for cell in piece.source.cells():
                bucket.setdefault(cell, []).append((pid, piece))
        buckets[side] = bucket

    diag = Diagnostics()
    result_edges: list[Edge] = []
    records: list[PathRecord] = []
    dead_records: list[PathRecord] = []
    queue: deque[_Path] = deque()

    for side in ("F", "G"):
        for pid, piece in enumerate(pieces[side]):
            if piece.src_in_cut:
                continue
            queue.append(_Path(
                side=side,
                start=piece.source,
                composite=piece.realizer,
                image=piece.realizer.apply(piece.source),
                weight=piece.weight,
                steps=((side, piece.edge_index),),
                regions=(piece.source,),
                visits={(side, pid): ((piece.source, piece.realizer,
                                       piece.weight),)},
            ))

    budget = max_steps
    while queue:
        path = queue.popleft()
        exits = cut_index.subtract(path.image)
        if not exits.is_empty():
            src = path.composite.invert().apply(exits)
            result_edges.append(Edge(path.weight, src, path.composite))
            records.append(PathRecord(path.steps, path.regions, src,
                                      path.composite, path.weight))
        inside = cut_index.intersect(path.image)
        if inside.is_empty():
            continue
        other = "G" if path.side == "F" else "F"
        covered = MeasurableSet.empty()
        candidates: dict[int, _Piece] = {}
        for cell in inside.cells():
            for pid, piece in buckets[other].get(cell, ()):
                candidates.setdefault(pid, piece)
        for pid in sorted(candidates):
            piece = candidates[pid]
            hit = inside.intersect(piece.source)
            if hit.is_empty():
                continue
            covered = covered.union(hit)
            if budget <= 0:
                diag.complete = False
                diag.unresolved_mass += path.weight * hit.measure()
                continue
            budget -= 1
            diag.steps_used += 1
            new_comp = path.composite.compose(piece.realizer)
            new_weight = monoid.product(path.weight, piece.weight)
            prior = path.visits.get((other, pid), ())
            repeat = None
            for region, comp, weight in prior:
                if comp == new_comp and hit.subset_of(region):
                    repeat = weight
                    break
            if repeat is not None:
                mass = new_weight * hit.measure()
                if new_weight == repeat:
                    diag.looping_mass += mass
                else:
                    # decaying revisit: its remaining emissions are
                    # bounded by the mass entering the repeat
                    diag.unresolved_mass += mass
                continue
            visits = dict(path.visits)
            visits[(other, pid)] = prior + ((hit, new_comp, new_weight),)
            queue.append(_Path(
                side=other,
                start=path.composite.invert().apply(hit),
                composite=new_comp,
                image=piece.realizer.apply(hit),
                weight=new_weight,
                steps=path.steps + ((other, piece.edge_index),),
                regions=path.regions + (hit,),
                visits=visits,
            ))
        dead = inside.subtract(covered)
        if not dead.is_empty():
            diag.dead_mass += path.weight * dead.measure()
            dead_records.append(PathRecord(
                path.steps, path.regions,
                path.composite.invert().apply(dead),
                path.composite, path.weight))

    order = sorted(range(len(result_edges)), key=lambda i: result_edges[i].key())
    edges = tuple(result_edges[i] for i in order)
    paths = [records[i] for i in order]
    carrier = f.carrier.union(g.carrier).subtract(cut)
    graphing = Graphing(monoid, f.microcosm.join(g.microcosm), carrier, edges)
    if not diag.complete:
        diag.notes.append(f"step budget {max_steps} exhausted; result partial")
    return PlugResult(graphing, paths, dead_records, diag)


# -- cycles and measurement ---------------------------------------------------

@dataclass(frozen=True)
class AlternatingCycle:
    """A closed alternating chain, canonical up to rotation."""

    steps: tuple[tuple[str, int], ...]
    realizer: Realizer
    support: MeasurableSet
    weight: Fraction


def _cycle_support(f: Graphing, g: Graphing,
                   steps: tuple[tuple[str, int], ...]):
    sides = {"F": f, "G": g}
    monoid = join_monoids(f.weights, g.weights)
    first = sides[steps[0][0]].edges[steps[0][1]]
    comp = None
    weight = monoid.one()
    image = None
    for side, idx in steps:
        e = sides[side].edges[idx]
        if comp is None:
            comp = e.realizer
            weight = e.weight
            image = e.realizer.apply(e.source)
            continue
        hit = image.intersect(e.source)
        if hit.is_empty():
            return None
        comp = comp.compose(e.realizer)
        image = e.realizer.apply(hit)
        weight = monoid.product(weight, e.weight)
    closing = image.intersect(first.source)
    if closing.is_empty():
        return None
    support = comp.invert().apply(closing)
    return support, comp, weight


def cycles(f: Graphing, g: Graphing, cut: MeasurableSet | None = None,
           max_len: int = 8) -> list[AlternatingCycle]:
    """All alternating cycles of length <= max_len with nonempty support,
    deduplicated up to rotation."""
    sides = {"F": f, "G": g}
    found: dict[tuple, AlternatingCycle] = {}

    def extend(steps, image):
        if len(steps) >= 2 and steps[0][0] != steps[-1][0]:
            closed = _cycle_support(f, g, steps)
            if closed is not None:
                canon = min(steps[i:] + steps[:i] for i in range(len(steps)))
                if canon not in found:
                    support, comp, weight = _cycle_support(f, g, canon)
                    found[canon] = AlternatingCycle(canon, comp, support, weight)
        if len(steps) >= max_len:
            return
        other = "G" if steps[-1][0] == "F" else "F"
        for idx, e in enumerate(sides[other].edges):
            hit = image.intersect(e.source)
            if hit.is_empty():
                continue
            extend(steps + ((other, idx),), e.realizer.apply(hit))

    for side in ("F", "G"):
        for idx, e in enumerate(sides[side].edges):
            extend(((side, idx),), e.realizer.apply(e.source))
    return [found[k] for k in sorted(found)]


@dataclass(frozen=True)
class MeasurementMap:
    """Total map from weights to extended nonnegative values."""

    table: tuple[tuple[Fraction, object], ...] = ()
    default: object = None

    @staticmethod
    def constant(value) -> "MeasurementMap":
        return MeasurementMap((), value)

    @staticmethod
    def from_table(mapping, default=None) -> "MeasurementMap":
        return MeasurementMap(tuple(sorted(mapping.items())), default)

    def __call__(self, weight):
        for key, value in self.table:
            if key == weight:
                return value
        if self.default is None:
            raise KeyError(f"measurement map undefined on weight {weight}")
        return self.default


def measurement(f: Graphing, g: Graphing, m: MeasurementMap,
                max_len: int = 8):
    """Sum over canonical cycles of support measure times the weight
    image; INFINITY as soon as an infinite term has positive support."""
    total = Fraction(0)
    for cyc in cycles(f, g, max_len=max_len):
        value = m(cyc.weight)
        if value is INFINITY:
            return INFINITY
        total += cyc.support.measure() * value
    return total


# -- acceptance ---------------------------------------------------------------

def _edge_landing(e: Edge, regions: Regions, where: MeasurableSet) -> Fraction:
    src = e.source.intersect(regions.launch)
    if src.is_empty():
        return Fraction(0)
    landed = e.realizer.apply(src).intersect(where)
    return e.weight * landed.measure()


def accept_mass(result: PlugResult, regions: Regions) -> Fraction:
    """Weight mass carried from the launch region into the accept cells,
    normalised by the launch measure."""
    total = sum((_edge_landing(e, regions, regions.accept)
                 for e in result.graphing.edges), Fraction(0))
    lam = regions.launch.measure()
    if lam == 0:
        raise ValueError("launch region is null")
    return total / lam


def reject_mass(result: PlugResult, regions: Regions) -> Fraction:
    total = sum((_edge_landing(e, regions, regions.reject)
                 for e in result.graphing.edges), Fraction(0))
    return total / regions.launch.measure()


def evaluate_test(result: PlugResult, test: Test, regions: Regions) -> Verdict:
    """Apply a test to an execution result.

    Unresolved mass (budget exhaustion, decaying revisits) makes a
    verdict undetermined only when it could still flip it; exactly
    repeating unit-weight loops are settled divergence and never do.
    """
    if regions.launch.is_empty() or regions.accept.is_empty() \
            or regions.reject.is_empty():
        raise ValueError("test needs nonempty launch/accept/reject regions")
    diag = result.diagnostics
    pending = diag.unresolved_mass > 0
    if test.kind in ("det", "nl"):
        hit = any(_edge_landing(e, regions, regions.accept) > 0
                  for e in result.graphing.edges)
        if hit:
            return Verdict.ACCEPT
        return Verdict.UNDETERMINED if pending else Verdict.REJECT
    if test.kind == "conl":
        hit = any(_edge_landing(e, regions, regions.reject) > 0
                  for e in result.graphing.edges)
        if hit:
            return Verdict.REJECT
        return Verdict.UNDETERMINED if pending else Verdict.ACCEPT
    mass = accept_mass(result, regions)
    if mass > test.cutpoint:
        return Verdict.ACCEPT
    slack = diag.unresolved_mass / regions.launch.measure()
    if mass + slack <= test.cutpoint:
        return Verdict.REJECT
    return Verdict.UNDETERMINED


@dataclass
class LanguageResult:
    accepted: list[str]
    undetermined: list[str]
    verdicts: dict[str, Verdict]


def language(machine, test: Test, max_len: int, one_way: bool = False,
             state_rows: int | None = None,
             max_steps: int = 10000) -> LanguageResult:
    """Words of length <= max_len the encoded machine accepts under the
    test, in (length, alphabet) order.  Undetermined words are excluded
    from the list and reported separately."""
    from .encodings import encode_word
    from .oracle import words_up_to

    problems = validate(machine.graphing)
    if problems:
        raise ValueError(f"machine graphing invalid: {problems}")
    rows = state_rows if state_rows is not None else len(machine.spec.states)
    accepted, undetermined = [], []
    verdicts: dict[str, Verdict] = {}
    for word in words_up_to(machine.spec.alphabet, max_len):
        enc = encode_word(word, machine.layout, state_rows=rows,
                          one_way=one_way)
        result = plug(machine.graphing, enc.graphing, max_steps=max_steps,
                      validate_inputs=False)
        verdict = evaluate_test(result, test,
                                machine.regions_for(len(word)))
        verdicts[word] = verdict
        if verdict is Verdict.ACCEPT:
            accepted.append(word)
        elif verdict is Verdict.UNDETERMINED:
            undetermined.append(word)
    return LanguageResult(accepted, undetermined, verdicts)
