"""Multihead automaton specifications and their text format.

A machine walks a cyclic word marked with ``*`` at position 0.  It has
i heads, of which exactly one is active; it observes the symbol under
the active head and responds with a weighted action: advance or retreat
the head (retreat needs a two-way machine), optionally activating
another head first, or halt with accept/reject.  Activating a head
requires that head to sit on the marker; otherwise the run dies, which
is neither accepting nor rejecting.

Text format, one machine per file::

    name: ones
    alphabet: 0 1
    heads: 1
    states: s0
    mode: det
    twoway: true

    # transitions: state, symbol -> [weight] action [swap j] [goto state]
    s0, * -> reject
    s0, 0 -> advance goto s0
    s0, 1 -> accept

The symbol ``*`` stands for the marker.  Weights are ``p/q`` rationals
and only meaningful in ``prob`` mode.  ``accept``/``reject`` are
terminal and take no ``goto``.  Missing (state, symbol) entries halt
the run dead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

MARKER = "*"

ADVANCE = "advance"
RETREAT = "retreat"
ACCEPT = "accept"
REJECT = "reject"

_MOVES = (ADVANCE, RETREAT)
_TERMINALS = (ACCEPT, REJECT)
_MODES = ("det", "nondet", "prob")


class MachineParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        self.message = message
        super().__init__(f"line {line_no}: {message}")


class MachineSpecError(ValueError):
    pass


@dataclass(frozen=True)
class Action:
    kind: str                    # advance | retreat | accept | reject
    weight: Fraction = Fraction(1)
    swap: int | None = None      # head to activate first
    goto: str | None = None      # next state, None for terminals

    def is_terminal(self) -> bool:
        return self.kind in _TERMINALS


@dataclass(frozen=True)
class MachineSpec:
    name: str
    alphabet: tuple[str, ...]
    heads: int
    states: tuple[str, ...]      # first entry is the initial state
    mode: str                    # det | nondet | prob
    two_way: bool
    transitions: tuple[tuple[tuple[str, str], tuple[Action, ...]], ...] = field(default=())

    @property
    def initial(self) -> str:
        return self.states[0]

    @property
    def transition_map(self) -> dict[tuple[str, str], tuple[Action, ...]]:
        return dict(self.transitions)

    def actions(self, state: str, symbol: str) -> tuple[Action, ...]:
        return self.transition_map.get((state, symbol), ())

    def uses_retreat(self) -> bool:
        return any(a.kind == RETREAT
                   for _, acts in self.transitions for a in acts)

    def retreat_entered_states(self) -> set[str]:
        """States that can be entered through a retreat step."""
        return {a.goto for _, acts in self.transitions for a in acts
                if a.kind == RETREAT and a.goto is not None}


def validate_spec(spec: MachineSpec) -> list[str]:
    problems = []
    if spec.heads < 1:
        problems.append("heads must be at least 1")
    if not spec.states:
        problems.append("at least one state is required")
    if spec.mode not in _MODES:
        problems.append(f"unknown mode {spec.mode!r}")
    if MARKER in spec.alphabet:
        problems.append("alphabet must not contain the marker")
    if len(set(spec.states)) != len(spec.states):
        problems.append("duplicate state names")
    symbols = set(spec.alphabet) | {MARKER}
    for (state, symbol), acts in spec.transitions:
        where = f"transition ({state}, {symbol})"
        if state not in spec.states:
            problems.append(f"{where}: unknown state")
        if symbol not in symbols:
            problems.append(f"{where}: symbol not in alphabet")
        if not acts:
            problems.append(f"{where}: empty action set")
        if spec.mode == "det" and len(acts) != 1:
            problems.append(f"{where}: det mode allows exactly one action")
        total = Fraction(0)
        for a in acts:
            if a.kind not in _MOVES + _TERMINALS:
                problems.append(f"{where}: unknown action {a.kind!r}")
                continue
            if spec.mode in ("det", "nondet") and a.weight != 1:
                problems.append(f"{where}: weight {a.weight} in {spec.mode} mode")
            if not (0 <= a.weight <= 1):
                problems.append(f"{where}: weight {a.weight} outside [0,1]")
            total += a.weight
            if a.kind == RETREAT and not spec.two_way:
                problems.append(f"{where}: retreat in a one-way machine")
            if a.swap is not None and not (2 <= a.swap <= spec.heads):
                problems.append(f"{where}: swap target {a.swap} out of range")
            if a.is_terminal() and a.goto is not None:
                problems.append(f"{where}: terminal action with goto")
            if not a.is_terminal():
                if a.goto is None:
                    problems.append(f"{where}: move without goto")
                elif a.goto not in spec.states:
                    problems.append(f"{where}: goto unknown state {a.goto!r}")
        if spec.mode == "prob" and total > 1:
            problems.append(f"{where}: weights sum to {total} > 1")
    return problems


def _parse_fraction(tok: str, line_no: int) -> Fraction:
    try:
        if "/" in tok:
            p, q = tok.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError):
        raise MachineParseError(line_no, f"bad rational {tok!r}") from None


def _parse_action(tokens: list[str], line_no: int) -> Action:
    idx = 0
    weight = Fraction(1)
    if tokens and (tokens[0][0].isdigit() or "/" in tokens[0]):
        weight = _parse_fraction(tokens[0], line_no)
        idx = 1
    if idx >= len(tokens):
        raise MachineParseError(line_no, "missing action keyword")
    kind = tokens[idx]
    idx += 1
    if kind not in _MOVES + _TERMINALS:
        raise MachineParseError(line_no, f"unknown action {kind!r}")
    swap = None
    goto = None
    while idx < len(tokens):
        word = tokens[idx]
        if word == "swap":
            if idx + 1 >= len(tokens):
                raise MachineParseError(line_no, "swap needs a head number")
            try:
                swap = int(tokens[idx + 1])
            except ValueError:
                raise MachineParseError(
                    line_no, f"bad head number {tokens[idx + 1]!r}") from None
            idx += 2
        elif word == "goto":
            if idx + 1 >= len(tokens):
                raise MachineParseError(line_no, "goto needs a state name")
            goto = tokens[idx + 1]
            idx += 2
        else:
            raise MachineParseError(line_no, f"unexpected token {word!r}")
    return Action(kind, weight, swap, goto)


def parse_machine(text: str) -> MachineSpec:
    headers: dict[str, str] = {}
    transitions: dict[tuple[str, str], list[Action]] = {}
    order: list[tuple[str, str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            lhs, rhs = line.split("->", 1)
            lhs_parts = [p.strip() for p in lhs.split(",")]
            if len(lhs_parts) != 2 or not all(lhs_parts):
                raise MachineParseError(
                    line_no, "transition needs 'state, symbol' before '->'")
            state, symbol = lhs_parts
            action = _parse_action(rhs.split(), line_no)
            key = (state, symbol)
            if key not in transitions:
                transitions[key] = []
                order.append(key)
            transitions[key].append(action)
        elif ":" in line:
            key, value = line.split(":", 1)
            headers[key.strip().lower()] = value.strip()
        else:
            raise MachineParseError(line_no, f"cannot parse {line!r}")

    def need(key: str) -> str:
        if key not in headers:
            raise MachineParseError(0, f"missing header {key!r}")
        return headers[key]

    name = need("name")
    alphabet = tuple(need("alphabet").split())
    states = tuple(need("states").split())
    mode = need("mode")
    try:
        heads = int(need("heads"))
    except ValueError:
        raise MachineParseError(0, "heads must be an integer") from None
    two_way_text = headers.get("twoway", "true").lower()
    if two_way_text not in ("true", "false"):
        raise MachineParseError(0, "twoway must be true or false")
    two_way = two_way_text == "true"
    if not states:
        raise MachineParseError(0, "states header is empty")
    spec = MachineSpec(name, alphabet, heads, states, mode, two_way,
                       tuple((k, tuple(transitions[k])) for k in order))
    problems = validate_spec(spec)
    if problems:
        raise MachineSpecError("; ".join(problems))
    return spec


def load_machine(path) -> MachineSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_machine(fh.read())


def format_machine(spec: MachineSpec) -> str:
    lines = [
        f"name: {spec.name}",
        f"alphabet: {' '.join(spec.alphabet)}",
        f"heads: {spec.heads}",
        f"states: {' '.join(spec.states)}",
        f"mode: {spec.mode}",
        f"twoway: {'true' if spec.two_way else 'false'}",
        "",
    ]
    for (state, symbol), acts in spec.transitions:
        for a in acts:
            parts = []
            if a.weight != 1:
                parts.append(f"{a.weight.numerator}/{a.weight.denominator}")
            parts.append(a.kind)
            if a.swap is not None:
                parts.append(f"swap {a.swap}")
            if a.goto is not None:
                parts.append(f"goto {a.goto}")
            lines.append(f"{state}, {symbol} -> {' '.join(parts)}")
    return "\n".join(lines) + "\n"
