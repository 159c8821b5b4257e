"""Scenario files, canonical machine text, DOT and plant tables."""

import pytest

from eccsynth.automaton import GAnd, GNot, GOr, GVar
from eccsynth.errors import ScenarioFormatError
from eccsynth.formats import (
    export_dot,
    parse_automaton,
    parse_guard,
    parse_plant,
    parse_scenarios,
    serialize_automaton,
    serialize_scenarios,
)
from eccsynth.verifier import FreePlant, TablePlant

EQ1_TEXT = """\
inevents R
outevents A B
invars 2
outvars 1
scenario
R[00] -> .[0]
R[01] -> B[1]
R[00] -> .[1]
R[01] -> B[0]
scenario
R[00] -> .[0]
R[10] -> A[0]
R[00] -> .[0]
R[01] -> B[1]
scenario
R[00] -> .[0]
R[10] -> A[0]
R[10] -> A[0]
"""


class TestScenarioFiles:
    def test_worked_example_parses(self, eq1_alphabet, eq1_scenarios):
        alphabet, scenarios = parse_scenarios(EQ1_TEXT)
        assert alphabet == eq1_alphabet
        assert [len(s) for s in scenarios] == [4, 4, 3]
        assert scenarios == eq1_scenarios

    def test_round_trip_canonical(self):
        alphabet, scenarios = parse_scenarios(EQ1_TEXT)
        assert serialize_scenarios(alphabet, scenarios) == EQ1_TEXT

    def test_comments_and_blanks_ignored(self):
        text = "# c\n\ninevents R\noutevents A\ninvars 1\noutvars 1\n" \
               "scenario # tail\nR[1] -> A[0]\n"
        _, scenarios = parse_scenarios(text)
        assert len(scenarios) == 1

    def test_empty_file_rejected(self):
        with pytest.raises(ScenarioFormatError):
            parse_scenarios("")

    def test_error_carries_line(self):
        text = "inevents R\noutevents A\ninvars 1\noutvars 1\nscenario\nbogus\n"
        with pytest.raises(ScenarioFormatError) as err:
            parse_scenarios(text)
        assert err.value.line == 6

    def test_unknown_event_rejected(self):
        text = "inevents R\noutevents A\ninvars 1\noutvars 1\n" \
               "scenario\nQ[1] -> A[0]\n"
        with pytest.raises(ScenarioFormatError):
            parse_scenarios(text)

    def test_wrong_width_rejected(self):
        text = "inevents R\noutevents A\ninvars 2\noutvars 1\n" \
               "scenario\nR[1] -> A[0]\n"
        with pytest.raises(ScenarioFormatError):
            parse_scenarios(text)


class TestGuards:
    def test_render_and_parse(self):
        guard = GAnd(GVar(0), GNot(GVar(1)))
        assert str(guard) == "(x1 & ~x2)"
        assert parse_guard(str(guard)) == guard

    def test_round_trip_misc(self):
        for guard in (GVar(2), GNot(GAnd(GVar(0), GVar(1))),
                      GOr(GNot(GVar(0)), GAnd(GVar(1), GVar(2)))):
            assert parse_guard(str(guard)) == guard

    def test_precedence(self):
        assert parse_guard("x1 | x2 & x3") == GOr(GVar(0), GAnd(GVar(1), GVar(2)))
        assert parse_guard("~x1 & x2") == GAnd(GNot(GVar(0)), GVar(1))

    def test_errors(self):
        for bad in ("", "x1 &", "y2", "(x1", "x1 x2"):
            with pytest.raises(ScenarioFormatError):
                parse_guard(bad)


class TestAutomatonText:
    def test_round_trip(self, eq1_three_state):
        text = serialize_automaton(eq1_three_state)
        parsed = parse_automaton(text)
        assert parsed == eq1_three_state
        assert serialize_automaton(parsed) == text

    def test_round_trip_synthesized(self, eq1_alphabet, eq1_scenarios):
        from eccsynth.synthesis import extended_min
        machine = extended_min(eq1_alphabet, eq1_scenarios, 1).automaton
        assert parse_automaton(serialize_automaton(machine)) == machine

    def test_rejects_garbage(self):
        with pytest.raises(ScenarioFormatError):
            parse_automaton("not a machine\n")


class TestDot:
    def test_isolated_node(self):
        from eccsynth.automaton import Algorithm, Alphabet, Automaton, State
        machine = Automaton(Alphabet(("R",), ("A",), ("x1",), ("z1",)),
                            (State(None, Algorithm.identity(1), ()),))
        dot = export_dot(machine)
        assert "digraph" in dot and "q1" in dot and "->" not in dot.split("];")[-1]

    def test_labels(self, eq1_three_state):
        dot = export_dot(eq1_three_state)
        assert 'q1 -> q3 [label="1: R [x2]"]' in dot
        assert "flip z1" in dot  # the B state flips the output variable
        assert "q2 / A" in dot


class TestPlantFiles:
    def test_free_keyword(self, eq1_alphabet):
        plant = parse_plant("free\n", eq1_alphabet)
        assert isinstance(plant, FreePlant)

    def test_table(self, eq1_alphabet):
        text = """\
states idle busy
initial idle
idle * -> idle R[00]
idle A -> busy R[10]
busy . 1 -> idle R[01]
"""
        plant = parse_plant(text, eq1_alphabet)
        assert isinstance(plant, TablePlant)
        assert plant.initial_state() == "idle"
        from eccsynth.automaton import OutputAction
        responses = plant.respond("idle", OutputAction("A", (False,)))
        # both the wildcard rule and the A rule match
        assert len(responses) == 2

    def test_bad_rule_rejected(self, eq1_alphabet):
        with pytest.raises(ScenarioFormatError):
            parse_plant("states p\np nonsense\n", eq1_alphabet)

    def test_unknown_state_rejected(self, eq1_alphabet):
        with pytest.raises(ScenarioFormatError):
            parse_plant("states p\np * -> q R[00]\n", eq1_alphabet)
