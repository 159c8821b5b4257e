import pytest

from eccsynth.automaton import (
    Algorithm,
    Alphabet,
    Automaton,
    GNot,
    GVar,
    InputAction,
    OutputAction,
    State,
    Transition,
    bits_from_string,
)


def el(event, input_bits, out_event, output_bits):
    return (InputAction(event, bits_from_string(input_bits)),
            OutputAction(None if out_event == "." else out_event,
                         bits_from_string(output_bits)))


@pytest.fixture(scope="session")
def eq1_alphabet():
    return Alphabet(("R",), ("A", "B"), ("x1", "x2"), ("z1",))


@pytest.fixture(scope="session")
def eq1_scenarios():
    s1 = (el("R", "00", ".", "0"), el("R", "01", "B", "1"),
          el("R", "00", ".", "1"), el("R", "01", "B", "0"))
    s2 = (el("R", "00", ".", "0"), el("R", "10", "A", "0"),
          el("R", "00", ".", "0"), el("R", "01", "B", "1"))
    s3 = (el("R", "00", ".", "0"), el("R", "10", "A", "0"),
          el("R", "10", "A", "0"))
    return [s1, s2, s3]


@pytest.fixture(scope="session")
def eq1_three_state(eq1_alphabet):
    """Hand construction: silent initial state, an A-state that keeps the
    output variable and a B-state that flips it; single-terminal guards."""
    keep = Algorithm.identity(1)
    flip = Algorithm(((True, False),))
    x1, x2 = GVar(0), GVar(1)
    return Automaton(eq1_alphabet, (
        State(None, keep, (Transition(2, "R", x2), Transition(1, "R", x1))),
        State("A", keep, (Transition(2, "R", x2), Transition(1, "R", x1))),
        State("B", flip, (Transition(2, "R", x2),)),
    ))


@pytest.fixture(scope="session")
def looping_machine():
    """Five-state machine with a live A-emitting cycle and a reachable B:
    q1 -x1-> q2(A) -x1-> q3(A) -x1-> q5(B) / -~x1-> q4(A) -x1-> q2(A)."""
    alphabet = Alphabet(("R",), ("A", "B"), ("x1",), ("z1",))
    keep = Algorithm.identity(1)
    x1 = GVar(0)
    return Automaton(alphabet, (
        State(None, keep, (Transition(1, "R", x1),)),
        State("A", keep, (Transition(2, "R", x1),)),
        State("A", keep, (Transition(4, "R", x1), Transition(3, "R", GNot(x1)))),
        State("A", keep, (Transition(1, "R", x1),)),
        State("B", keep, ()),
    ))
