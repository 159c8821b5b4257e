"""File formats: scenario files, canonical machine text, DOT, plant tables.

The canonical machine text is the interchange format (it re-parses to an
equal machine); DOT is render-only.  All formats use ``.`` for the empty
output event and ``#`` for comments.
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Sequence, Tuple

from .automaton import (
    Algorithm,
    Alphabet,
    Automaton,
    GAnd,
    GNot,
    GOr,
    GVar,
    GuardExpr,
    InputAction,
    OutputAction,
    Scenario,
    State,
    Transition,
    bits_from_string,
    bits_to_string,
)
from .errors import ScenarioFormatError
from .verifier import FreePlant, Plant, PlantRule, TablePlant

_ACTION_RE = re.compile(r"^(?P<ie>\w+)\s*\[(?P<iv>[01]*)\]\s*->\s*"
                        r"(?P<oe>\w+|\.)\s*\[(?P<ov>[01]*)\]$")


def _meaningful_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


# -- scenario files -----------------------------------------------------------


def parse_scenarios(text: str) -> Tuple[Alphabet, List[Scenario]]:
    header: Dict[str, List[str]] = {}
    scenarios: List[List] = []
    in_body = False
    for lineno, line in _meaningful_lines(text):
        words = line.split()
        key = words[0]
        if key in ("inevents", "outevents", "invars", "outvars") and not in_body:
            header[key] = words[1:]
            continue
        if key == "scenario":
            if len(words) != 1:
                raise ScenarioFormatError("unexpected text after 'scenario'", lineno)
            _require_header(header, lineno)
            in_body = True
            scenarios.append([])
            continue
        if not in_body:
            raise ScenarioFormatError(f"unexpected line before first scenario: {line!r}",
                                      lineno)
        scenarios[-1].append(_parse_element(line, header, lineno))
    if not header:
        raise ScenarioFormatError("empty scenario file", 1)
    _require_header(header, 1)
    alphabet = _header_alphabet(header)
    if not scenarios or any(not s for s in scenarios):
        raise ScenarioFormatError("scenario file has no (or empty) scenarios", 1)
    return alphabet, [tuple(s) for s in scenarios]


def _require_header(header, lineno):
    for key in ("inevents", "invars", "outvars"):
        if key not in header:
            raise ScenarioFormatError(f"missing {key!r} header", lineno)
    header.setdefault("outevents", [])
    for key in ("invars", "outvars"):
        if len(header[key]) != 1 or not header[key][0].isdigit():
            raise ScenarioFormatError(f"{key!r} wants one number", lineno)


def _header_alphabet(header) -> Alphabet:
    num_in = int(header["invars"][0])
    num_out = int(header["outvars"][0])
    return Alphabet(
        input_events=tuple(header["inevents"]),
        output_events=tuple(header["outevents"]),
        input_vars=tuple(f"x{i + 1}" for i in range(num_in)),
        output_vars=tuple(f"z{i + 1}" for i in range(num_out)),
    )


def _parse_element(line: str, header, lineno: int):
    match = _ACTION_RE.match(line)
    if not match:
        raise ScenarioFormatError(f"bad element line: {line!r}", lineno)
    ie, iv = match.group("ie"), match.group("iv")
    oe, ov = match.group("oe"), match.group("ov")
    if ie not in header["inevents"]:
        raise ScenarioFormatError(f"unknown input event {ie!r}", lineno)
    if oe != "." and oe not in header["outevents"]:
        raise ScenarioFormatError(f"unknown output event {oe!r}", lineno)
    if len(iv) != int(header["invars"][0]):
        raise ScenarioFormatError(f"input vector {iv!r} has wrong width", lineno)
    if len(ov) != int(header["outvars"][0]):
        raise ScenarioFormatError(f"output vector {ov!r} has wrong width", lineno)
    return (InputAction(ie, bits_from_string(iv)),
            OutputAction(None if oe == "." else oe, bits_from_string(ov)))


def serialize_scenarios(alphabet: Alphabet, scenarios: Sequence[Scenario]) -> str:
    lines = [
        "inevents " + " ".join(alphabet.input_events),
        "outevents " + " ".join(alphabet.output_events),
        f"invars {alphabet.num_inputs}",
        f"outvars {alphabet.num_outputs}",
    ]
    for scenario in scenarios:
        lines.append("scenario")
        for action, output in scenario:
            lines.append(f"{action.event}[{bits_to_string(action.values)}] -> "
                         f"{output.event or '.'}[{bits_to_string(output.values)}]")
    return "\n".join(lines) + "\n"


# -- guard formulas (infix) ---------------------------------------------------


def parse_guard(text: str) -> GuardExpr:
    """Infix guards: x<i>, ~, &, |, parentheses; ~ binds tightest, then &."""
    tokens = re.findall(r"x\d+|[()&|~]|\S", text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ScenarioFormatError(
                f"bad guard {text!r}: expected {expected or 'token'}, got {tok!r}")
        pos += 1
        return tok

    def parse_or():
        node = parse_and()
        while peek() == "|":
            take()
            node = GOr(node, parse_and())
        return node

    def parse_and():
        node = parse_unary()
        while peek() == "&":
            take()
            node = GAnd(node, parse_unary())
        return node

    def parse_unary():
        tok = peek()
        if tok == "~":
            take()
            return GNot(parse_unary())
        if tok == "(":
            take()
            node = parse_or()
            take(")")
            return node
        if tok is not None and re.fullmatch(r"x\d+", tok):
            take()
            return GVar(int(tok[1:]) - 1)
        raise ScenarioFormatError(f"bad guard {text!r}: unexpected {tok!r}")

    node = parse_or()
    if peek() is not None:
        raise ScenarioFormatError(f"bad guard {text!r}: trailing {peek()!r}")
    return node


# -- canonical machine text ---------------------------------------------------


def serialize_automaton(machine: Automaton) -> str:
    a = machine.alphabet
    lines = [
        "automaton",
        "inevents " + " ".join(a.input_events),
        "outevents " + " ".join(a.output_events),
        f"invars {a.num_inputs}",
        f"outvars {a.num_outputs}",
        f"states {machine.num_states}",
    ]
    for i, state in enumerate(machine.states):
        algo = " ".join(f"{int(p[0])}{int(p[1])}" for p in state.algorithm.pairs)
        lines.append(f"state {i + 1} {state.output_event or '.'} {algo}")
    for i, state in enumerate(machine.states):
        for t in state.transitions:
            lines.append(f"trans {i + 1} {t.input_event} ({t.guard}) -> {t.dest + 1}")
    return "\n".join(lines) + "\n"


_TRANS_RE = re.compile(r"^trans\s+(?P<src>\d+)\s+(?P<event>\w+)\s+"
                       r"\((?P<guard>.*)\)\s*->\s*(?P<dest>\d+)$")


def parse_automaton(text: str) -> Automaton:
    lines = list(_meaningful_lines(text))
    if not lines or lines[0][1] != "automaton":
        raise ScenarioFormatError("machine file must start with 'automaton'",
                                  lines[0][0] if lines else 1)
    header: Dict[str, List[str]] = {}
    states: Dict[int, Tuple[Optional[str], Algorithm]] = {}
    transitions: Dict[int, List[Transition]] = {}
    num_states = None
    for lineno, line in lines[1:]:
        words = line.split()
        key = words[0]
        if key in ("inevents", "outevents", "invars", "outvars"):
            header[key] = words[1:]
        elif key == "states":
            num_states = int(words[1])
        elif key == "state":
            idx = int(words[1]) - 1
            event = None if words[2] == "." else words[2]
            pairs = tuple((w[0] == "1", w[1] == "1") for w in words[3:])
            states[idx] = (event, Algorithm(pairs))
            transitions.setdefault(idx, [])
        elif key == "trans":
            match = _TRANS_RE.match(line)
            if not match:
                raise ScenarioFormatError(f"bad transition line: {line!r}", lineno)
            src = int(match.group("src")) - 1
            transitions.setdefault(src, []).append(Transition(
                dest=int(match.group("dest")) - 1,
                input_event=match.group("event"),
                guard=parse_guard(match.group("guard")),
            ))
        else:
            raise ScenarioFormatError(f"unexpected line: {line!r}", lineno)
    _require_header(header, 1)
    alphabet = _header_alphabet(header)
    if num_states is None or set(states) != set(range(num_states)):
        raise ScenarioFormatError("missing or inconsistent state declarations", 1)
    return Automaton(alphabet, tuple(
        State(states[i][0], states[i][1], tuple(transitions.get(i, ())))
        for i in range(num_states)))


# -- DOT rendering (render-only) ----------------------------------------------


def _algorithm_label(algorithm: Algorithm, alphabet: Alphabet) -> List[str]:
    parts = []
    for name, (when_false, when_true) in zip(alphabet.output_vars, algorithm.pairs):
        if (when_false, when_true) == (False, True):
            continue  # keep
        if (when_false, when_true) == (True, False):
            parts.append(f"flip {name}")
        else:
            parts.append(f"{name}:={int(when_true)}")
    return parts


def export_dot(machine: Automaton) -> str:
    lines = ["digraph ecc {", "  rankdir=LR;", "  node [shape=box];"]
    for i, state in enumerate(machine.states):
        label_lines = [f"q{i + 1} / {state.output_event or 'ε'}"]
        label_lines += _algorithm_label(state.algorithm, machine.alphabet)
        label = "\\n".join(label_lines)
        lines.append(f'  q{i + 1} [label="{label}"];')
    for i, state in enumerate(machine.states):
        for k, t in enumerate(state.transitions, start=1):
            lines.append(
                f'  q{i + 1} -> q{t.dest + 1} [label="{k}: {t.input_event} [{t.guard}]"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- plant files ---------------------------------------------------------------


_PLANT_RULE_RE = re.compile(
    r"^(?P<state>\S+)\s+(?P<oe>\w+|\.|\*)(?:\s+(?P<pat>[01*]+))?\s*->\s*"
    r"(?P<next>\S+)\s+(?P<ie>\w+)\s*\[(?P<iv>[01]*)\]$")


def parse_plant(text: str, alphabet: Alphabet) -> Plant:
    """Either the single keyword ``free`` or an explicit response table.

    Table format: a ``states`` line (first state is initial, or use an
    explicit ``initial`` line), then one rule per line::

        <state> <outEvent|.|*> [<valuesPattern>] -> <state'> <inEvent>[<bits>]

    The rule fires when the controller's last output action matches the
    event (``*`` = any, ``.`` = the empty event) and the optional output
    values pattern (``*`` = don't care).
    """
    lines = list(_meaningful_lines(text))
    if len(lines) == 1 and lines[0][1] == "free":
        return FreePlant(alphabet)
    states: List[str] = []
    initial: Optional[str] = None
    rules: List[PlantRule] = []
    for lineno, line in lines:
        words = line.split()
        if words[0] == "states":
            states = words[1:]
            continue
        if words[0] == "initial":
            initial = words[1]
            continue
        match = _PLANT_RULE_RE.match(line)
        if not match:
            raise ScenarioFormatError(f"bad plant rule: {line!r}", lineno)
        oe = match.group("oe")
        pattern = match.group("pat") or "*" * alphabet.num_outputs
        if len(pattern) != alphabet.num_outputs:
            raise ScenarioFormatError("plant pattern has wrong width", lineno)
        iv = match.group("iv")
        if len(iv) != alphabet.num_inputs:
            raise ScenarioFormatError("plant input vector has wrong width", lineno)
        if match.group("ie") not in alphabet.input_events:
            raise ScenarioFormatError(f"unknown input event {match.group('ie')!r}", lineno)
        rules.append(PlantRule(
            state=match.group("state"),
            output_event=None if oe == "." else oe,
            values_pattern=tuple(None if c == "*" else c == "1" for c in pattern),
            next_state=match.group("next"),
            action=InputAction(match.group("ie"), bits_from_string(iv)),
        ))
    if not states:
        raise ScenarioFormatError("plant file lacks a 'states' line", 1)
    for rule in rules:
        if rule.state not in states or rule.next_state not in states:
            raise ScenarioFormatError(f"plant rule uses unknown state", 1)
    return TablePlant(states, initial or states[0], rules)
