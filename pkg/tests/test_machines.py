from fractions import Fraction

import pytest

from graphvm.machines import (Action, MachineParseError, MachineSpec,
                              MachineSpecError, format_machine, parse_machine,
                              validate_spec)

ONES = """
name: ones
alphabet: 0 1
heads: 1
states: s0
mode: det
twoway: true

s0, * -> reject
s0, 0 -> advance goto s0
s0, 1 -> accept
"""


def test_parse_round_trip():
    spec = parse_machine(ONES)
    assert spec.name == "ones"
    assert spec.alphabet == ("0", "1")
    assert spec.initial == "s0"
    assert spec.actions("s0", "0") == (Action("advance", Fraction(1), None, "s0"),)
    assert spec.actions("s0", "1") == (Action("accept"),)
    assert parse_machine(format_machine(spec)) == spec


def test_parse_weights_and_swap():
    spec = parse_machine("""
name: w
alphabet: a
heads: 2
states: p q
mode: prob
twoway: true
p, a -> 1/3 advance swap 2 goto q
p, a -> 2/3 reject
q, * -> accept
""")
    acts = spec.actions("p", "a")
    assert acts[0] == Action("advance", Fraction(1, 3), 2, "q")
    assert acts[1] == Action("reject", Fraction(2, 3))


def test_parse_errors_cite_line_numbers():
    with pytest.raises(MachineParseError) as err:
        parse_machine(ONES.replace("s0, 1 -> accept", "s0, 1 -> acceptx"))
    assert "line 11" in str(err.value)
    with pytest.raises(MachineParseError) as err:
        parse_machine("name: x\nalphabet: 0\nheads: 1\nstates: s\nmode: det\n"
                      "twoway: true\ns, 0 -> advance goto\n")
    assert "line 7" in str(err.value)
    assert err.value.line_no == 7


def test_missing_header_rejected():
    with pytest.raises(MachineParseError):
        parse_machine("name: x\nheads: 1\nstates: s\nmode: det\n")


def test_spec_validation():
    spec = parse_machine(ONES)
    assert validate_spec(spec) == []
    bad = MachineSpec("m", ("0",), 1, ("s",), "det", False,
                      ((("s", "0"), (Action("retreat", goto="s"),)),))
    assert any("retreat in a one-way machine" in p for p in validate_spec(bad))
    bad = MachineSpec("m", ("0",), 1, ("s",), "det", True,
                      ((("s", "0"), (Action("advance", goto="s"),
                                     Action("accept"))),))
    assert any("exactly one action" in p for p in validate_spec(bad))
    bad = MachineSpec("m", ("0",), 1, ("s",), "prob", True,
                      ((("s", "0"), (Action("accept", Fraction(2, 3)),
                                     Action("reject", Fraction(2, 3)))),))
    assert any("sum to" in p for p in validate_spec(bad))
    bad = MachineSpec("m", ("0",), 1, ("s",), "det", True,
                      ((("s", "0"), (Action("advance", swap=2, goto="s"),)),))
    assert any("swap target" in p for p in validate_spec(bad))


def test_parse_rejects_invalid_spec():
    with pytest.raises(MachineSpecError):
        parse_machine(ONES.replace("mode: det", "mode: banana"))


def test_retreat_entered_states():
    spec = parse_machine("""
name: r
alphabet: 0
heads: 1
states: a b
mode: det
twoway: true
a, 0 -> retreat goto b
b, 0 -> advance goto a
""")
    assert spec.retreat_entered_states() == {"b"}
    assert spec.uses_retreat()
