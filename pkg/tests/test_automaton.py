"""Machine semantics: guard evaluation, stepping, scenario satisfaction."""

import pytest

from eccsynth.automaton import (
    Algorithm,
    Alphabet,
    Automaton,
    GAnd,
    GNot,
    GOr,
    GVar,
    InputAction,
    OutputAction,
    State,
    Transition,
    eval_guard,
)
from eccsynth.errors import StructuralError

from conftest import el

T, F = True, False


class TestEvalGuard:
    def test_terminal(self):
        assert eval_guard(GVar(0), (T, F)) is True
        assert eval_guard(GVar(1), (T, F)) is False

    def test_de_morgan_base(self):
        guard = GNot(GAnd(GVar(0), GVar(1)))
        assert eval_guard(guard, (T, T)) is False
        assert eval_guard(guard, (T, F)) is True

    def test_or_all_zero(self):
        assert eval_guard(GOr(GVar(0), GVar(1)), (F, F)) is False

    def test_terminal_out_of_range(self):
        with pytest.raises(StructuralError):
            eval_guard(GVar(2), (T, F))

    def test_sizes(self):
        assert GVar(0).size() == 1
        assert GNot(GVar(0)).size() == 2
        assert GAnd(GVar(0), GOr(GVar(1), GNot(GVar(0)))).size() == 6


class TestStep:
    def make(self, transitions):
        alphabet = Alphabet(("R",), ("A",), ("x1",), ("z1",))
        return Automaton(alphabet, (
            State(None, Algorithm.identity(1), tuple(transitions)),
            State("A", Algorithm(((True, False),)), ()),
        ))

    def test_no_transition_ignores(self):
        m = self.make(())
        state, out = m.step(0, (False,), InputAction("R", (True,)))
        assert state == 0
        assert out == OutputAction(None, (False,))

    def test_priority_lower_index_wins(self):
        m = self.make([Transition(1, "R", GVar(0)), Transition(0, "R", GVar(0))])
        state, out = m.step(0, (False,), InputAction("R", (True,)))
        assert state == 1
        assert out.event == "A"

    def test_self_loop_applies_algorithm_and_event(self):
        alphabet = Alphabet(("R",), ("A",), ("x1",), ("z1",))
        m = Automaton(alphabet, (
            State("A", Algorithm(((True, False),)),
                  (Transition(0, "R", GVar(0)),)),
        ))
        state, out = m.step(0, (False,), InputAction("R", (True,)))
        assert state == 0
        assert out == OutputAction("A", (True,))  # flip applied on the loop

    def test_event_mismatch_does_not_block(self):
        alphabet = Alphabet(("R", "S"), ("A",), ("x1",), ("z1",))
        m = Automaton(alphabet, (
            State(None, Algorithm.identity(1), (
                Transition(1, "S", GVar(0)),  # matches guard but not event
                Transition(1, "R", GVar(0)),
            )),
            State("A", Algorithm.identity(1), ()),
        ))
        state, out = m.step(0, (False,), InputAction("R", (True,)))
        assert state == 1 and out.event == "A"

    def test_purity(self):
        m = self.make([Transition(1, "R", GVar(0))])
        args = (0, (False,), InputAction("R", (True,)))
        assert m.step(*args) == m.step(*args)


class TestSatisfies:
    def test_empty_scenario(self, eq1_three_state):
        assert eq1_three_state.satisfies(())

    def test_worked_example_construction(self, eq1_three_state, eq1_scenarios):
        assert eq1_three_state.satisfies_all(eq1_scenarios)

    def test_counts_of_construction(self, eq1_three_state):
        assert eq1_three_state.transition_count() == 5
        assert eq1_three_state.guard_complexity() == 5

    def test_set_algorithm_fails_fourth_element(self, eq1_alphabet, eq1_scenarios):
        keep = Algorithm.identity(1)
        set_one = Algorithm(((True, True),))
        x1, x2 = GVar(0), GVar(1)
        mutated = Automaton(eq1_alphabet, (
            State(None, keep, (Transition(2, "R", x2), Transition(1, "R", x1))),
            State("A", keep, (Transition(2, "R", x2), Transition(1, "R", x1))),
            State("B", set_one, (Transition(2, "R", x2),)),
        ))
        s1 = eq1_scenarios[0]
        assert not mutated.satisfies(s1)
        assert mutated.first_mismatch(s1) == 3  # 4th element expects z1=0

    def test_ignore_preserves_everything(self, eq1_three_state):
        # no guard fires on input 00 in any state
        for state in range(eq1_three_state.num_states):
            for outputs in ((False,), (True,)):
                new_state, out = eq1_three_state.step(
                    state, outputs, InputAction("R", (False, False)))
                assert new_state == state
                assert out == OutputAction(None, outputs)

    def test_moore_property(self, eq1_three_state):
        # the emitted non-empty event depends only on the destination state
        seen = {}
        for state in range(3):
            for bits in ((T, F), (F, T), (T, T)):
                for outputs in ((F,), (T,)):
                    dest, out = eq1_three_state.step(
                        state, outputs, InputAction("R", bits))
                    if out.event is not None:
                        assert seen.setdefault(dest, out.event) == out.event

    def test_counts_empty_machine(self):
        alphabet = Alphabet(("R",), ("A",), ("x1",), ("z1",))
        m = Automaton(alphabet, (State(None, Algorithm.identity(1), ()),))
        assert m.transition_count() == 0
        assert m.guard_complexity() == 0


class TestNegativeReplay:
    def test_loopless_reproduction(self, eq1_three_state, eq1_scenarios):
        assert eq1_three_state.reproduces_negative(eq1_scenarios[2], None)

    def test_divergent_scenario_not_reproduced(self, eq1_three_state):
        bad = (el("R", "10", "B", "0"),)  # machine emits A there
        assert not eq1_three_state.reproduces_negative(bad, None)

    def test_loop_requires_config_repetition(self, eq1_three_state):
        # A-state self loop: configuration repeats after each element
        loop = (el("R", "10", "A", "0"), el("R", "10", "A", "0"))
        assert eq1_three_state.reproduces_negative(loop, loop_start=1)
        # B flips the output variable, so the configuration does not repeat
        flip = (el("R", "01", "B", "1"), el("R", "01", "B", "0"))
        assert not eq1_three_state.reproduces_negative(flip, loop_start=1)


class TestValidation:
    def test_unknown_event_rejected(self):
        alphabet = Alphabet(("R",), ("A",), ("x1",), ("z1",))
        with pytest.raises(StructuralError):
            Automaton(alphabet, (State("Z", Algorithm.identity(1), ()),))

    def test_bad_dest_rejected(self):
        alphabet = Alphabet(("R",), ("A",), ("x1",), ("z1",))
        with pytest.raises(StructuralError):
            Automaton(alphabet, (
                State("A", Algorithm.identity(1),
                      (Transition(3, "R", GVar(0)),)),))

    def test_alphabet_invariants(self):
        with pytest.raises(StructuralError):
            Alphabet((), ("A",), ("x1",), ("z1",))
        with pytest.raises(StructuralError):
            Alphabet(("R", "R"), ("A",), ("x1",), ("z1",))
        # empty output events are allowed (all-silent scenario data)
        Alphabet(("R",), (), ("x1",), ("z1",))
