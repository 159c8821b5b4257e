"""Executable semantics of guarded Moore machines.

A machine has states carrying an output event and a per-variable update
algorithm, and prioritized transitions guarded by Boolean formulas over the
input variables.  The absent output event is represented by ``None``
throughout, never by a string.  Everything here is immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

from .errors import StructuralError

Bits = Tuple[bool, ...]


def bits_from_string(text: str) -> Bits:
    """'011' -> (False, True, True)."""
    if any(c not in "01" for c in text):
        raise StructuralError(f"not a bit string: {text!r}")
    return tuple(c == "1" for c in text)


def bits_to_string(bits: Sequence[bool]) -> str:
    return "".join("1" if b else "0" for b in bits)


@dataclass(frozen=True)
class Alphabet:
    """Interface of a machine: event names and variable names.

    ``input_vars``/``output_vars`` are ordered name lists; guard terminals and
    action bit vectors index into them positionally.
    """

    input_events: Tuple[str, ...]
    output_events: Tuple[str, ...]
    input_vars: Tuple[str, ...]
    output_vars: Tuple[str, ...]

    def __post_init__(self):
        for label, names in (
            ("input_events", self.input_events),
            ("input_vars", self.input_vars),
            ("output_vars", self.output_vars),
        ):
            if not names:
                raise StructuralError(f"alphabet has empty {label}")
        for label, names in (
            ("input_events", self.input_events),
            ("output_events", self.output_events),
            ("input_vars", self.input_vars),
            ("output_vars", self.output_vars),
        ):
            if len(set(names)) != len(names):
                raise StructuralError(f"duplicate names in {label}: {names}")
            if any(n in ("", ".") for n in names):
                raise StructuralError(f"reserved or empty name in {label}")

    @property
    def num_inputs(self) -> int:
        return len(self.input_vars)

    @property
    def num_outputs(self) -> int:
        return len(self.output_vars)


@dataclass(frozen=True)
class InputAction:
    event: str
    values: Bits

    def __str__(self):
        return f"{self.event}[{bits_to_string(self.values)}]"


@dataclass(frozen=True)
class OutputAction:
    event: Optional[str]  # None is the empty event
    values: Bits

    def __str__(self):
        return f"{self.event or '.'}[{bits_to_string(self.values)}]"


ScenarioElement = Tuple[InputAction, OutputAction]
Scenario = Tuple[ScenarioElement, ...]


def make_scenario(elements: Iterable[ScenarioElement]) -> Scenario:
    return tuple(elements)


# --- Guard formulas ---------------------------------------------------------
#
# Parse trees over input variables.  Binary operators are strictly binary;
# the decoder right-nests when it needs wider conjunctions.


class GuardExpr:
    __slots__ = ()

    def eval(self, values: Sequence[bool]) -> bool:
        raise NotImplementedError

    def size(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class GVar(GuardExpr):
    index: int

    def eval(self, values):
        if not 0 <= self.index < len(values):
            raise StructuralError(
                f"guard terminal x{self.index + 1} out of range for {len(values)} inputs"
            )
        return values[self.index]

    def size(self):
        return 1

    def __str__(self):
        return f"x{self.index + 1}"


@dataclass(frozen=True)
class GNot(GuardExpr):
    child: GuardExpr

    def eval(self, values):
        return not self.child.eval(values)

    def size(self):
        return 1 + self.child.size()

    def __str__(self):
        if isinstance(self.child, GVar):
            return f"~{self.child}"
        return f"~({self.child})"


@dataclass(frozen=True)
class GAnd(GuardExpr):
    left: GuardExpr
    right: GuardExpr

    def eval(self, values):
        return self.left.eval(values) and self.right.eval(values)

    def size(self):
        return 1 + self.left.size() + self.right.size()

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class GOr(GuardExpr):
    left: GuardExpr
    right: GuardExpr

    def eval(self, values):
        return self.left.eval(values) or self.right.eval(values)

    def size(self):
        return 1 + self.left.size() + self.right.size()

    def __str__(self):
        return f"({self.left} | {self.right})"


def eval_guard(guard: GuardExpr, values: Sequence[bool]) -> bool:
    """Standard Boolean semantics of the parse tree."""
    return guard.eval(values)


# --- Machine ----------------------------------------------------------------


@dataclass(frozen=True)
class Algorithm:
    """Per-output-variable update: (new value if old was 0, new value if old was 1).

    Each output variable depends only on its own previous value.  Identity
    pairs (False, True) mean "keep".
    """

    pairs: Tuple[Tuple[bool, bool], ...]

    @classmethod
    def identity(cls, num_outputs: int) -> "Algorithm":
        return cls(tuple((False, True) for _ in range(num_outputs)))

    def apply(self, values: Bits) -> Bits:
        if len(values) != len(self.pairs):
            raise StructuralError(
                f"algorithm over {len(self.pairs)} outputs applied to {len(values)} values"
            )
        return tuple(p[1] if v else p[0] for v, p in zip(values, self.pairs))

    def __str__(self):
        return ",".join(f"{int(p[0])}{int(p[1])}" for p in self.pairs)


@dataclass(frozen=True)
class Transition:
    dest: int
    input_event: str
    guard: GuardExpr


@dataclass(frozen=True)
class State:
    output_event: Optional[str]
    algorithm: Algorithm
    transitions: Tuple[Transition, ...] = ()


@dataclass(frozen=True)
class Automaton:
    """Guarded Moore machine.  The initial state is index 0.

    Transition priority is list position: on a step, the first transition
    whose input event matches and whose guard holds is taken.
    """

    alphabet: Alphabet
    states: Tuple[State, ...]

    def __post_init__(self):
        if not self.states:
            raise StructuralError("automaton needs at least one state")
        for i, state in enumerate(self.states):
            if state.output_event is not None and state.output_event not in self.alphabet.output_events:
                raise StructuralError(f"state {i} emits unknown event {state.output_event!r}")
            if len(state.algorithm.pairs) != self.alphabet.num_outputs:
                raise StructuralError(f"state {i} algorithm has wrong width")
            for t in state.transitions:
                if not 0 <= t.dest < len(self.states):
                    raise StructuralError(f"state {i} transition to invalid state {t.dest}")
                if t.input_event not in self.alphabet.input_events:
                    raise StructuralError(f"state {i} transition on unknown event {t.input_event!r}")

    @property
    def num_states(self) -> int:
        return len(self.states)

    def initial_outputs(self) -> Bits:
        return tuple(False for _ in self.alphabet.output_vars)

    def step(self, state_idx: int, outputs: Bits, action: InputAction) -> Tuple[int, OutputAction]:
        """Process one input action from (state, outputs).

        Scans the state's transitions in priority order; the first one whose
        event matches and whose guard fires is taken: the machine moves to its
        destination, emits the destination's output event, and applies the
        destination's algorithm.  If none fires the action is ignored: state
        and outputs are unchanged and the empty event is emitted.
        """
        if len(outputs) != self.alphabet.num_outputs:
            raise StructuralError("outputs vector has wrong width")
        for t in self.states[state_idx].transitions:
            if t.input_event == action.event and t.guard.eval(action.values):
                dest_state = self.states[t.dest]
                new_outputs = dest_state.algorithm.apply(outputs)
                return t.dest, OutputAction(dest_state.output_event, new_outputs)
        return state_idx, OutputAction(None, outputs)

    def run(self, actions: Iterable[InputAction]) -> list[OutputAction]:
        """Replay a sequence of input actions from the initial configuration."""
        state, outputs = 0, self.initial_outputs()
        emitted = []
        for action in actions:
            state, out = self.step(state, outputs, action)
            outputs = out.values
            emitted.append(out)
        return emitted

    def first_mismatch(self, scenario: Scenario) -> Optional[int]:
        """Index (0-based) of the first element whose output the machine misses.

        ``None`` when the machine satisfies the scenario.  Comparison covers
        the full output action: event and every output value.
        """
        state, outputs = 0, self.initial_outputs()
        for i, (action, expected) in enumerate(scenario):
            state, out = self.step(state, outputs, action)
            outputs = out.values
            if out != expected:
                return i
        return None

    def satisfies(self, scenario: Scenario) -> bool:
        """True iff replaying the scenario's inputs reproduces all its outputs."""
        return self.first_mismatch(scenario) is None

    def satisfies_all(self, scenarios: Iterable[Scenario]) -> bool:
        return all(self.satisfies(s) for s in scenarios)

    def reproduces_negative(self, elements: Scenario, loop_start: Optional[int] = None) -> bool:
        """Does the machine exhibit a prohibited behavior?

        Loopless: true iff the machine reproduces every element.  Looping
        (``loop_start`` 1-based): additionally the configuration (state,
        outputs) after the last element must equal the one after the
        loop-start element, so feeding the cycle's inputs forever keeps
        reproducing it.
        """
        state, outputs = 0, self.initial_outputs()
        configs = [(state, outputs)]
        for action, expected in elements:
            state, out = self.step(state, outputs, action)
            outputs = out.values
            if out != expected:
                return False
            configs.append((state, outputs))
        if loop_start is None:
            return True
        return configs[-1] == configs[loop_start]

    def transition_count(self) -> int:
        return sum(len(s.transitions) for s in self.states)

    def guard_complexity(self) -> int:
        """Total parse-tree node count over all transition guards."""
        return sum(t.guard.size() for s in self.states for t in s.transitions)
