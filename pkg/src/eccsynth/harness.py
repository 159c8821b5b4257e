"""Random-automata evaluation: generate, simulate, infer, validate.

The study loop draws random target machines, simulates training scenarios
by random walks (a plant with random dynamics), infers a machine from them,
and validates against a fresh simulated set.  The validation metric is the
percentage of validation scenarios the inferred machine satisfies in full
(the forward check).
"""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

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
    Scenario,
    State,
    Transition,
)
from .errors import GenerationFailedError
from .synthesis import (
    SynthesisOptions,
    SynthesisResult,
    basic_min,
    extended_min,
    extended_min_ub,
)

GENERATOR_NOTES = (
    "guards: single terminal with probability 1/2, else a random tree of up "
    "to 3 nodes; unreachable states reconnected by redirecting one random "
    "transition"
)


@dataclass(frozen=True)
class RandomMachineConfig:
    num_states: int
    max_transitions: int  # total, at most num_states^2 * input events
    num_input_vars: int
    num_output_vars: int
    num_input_events: int = 1
    num_output_events: int = 1
    max_retries: int = 50

    def __post_init__(self):
        cap = self.num_states ** 2 * self.num_input_events
        if self.max_transitions > cap:
            raise GenerationFailedError(
                f"max_transitions {self.max_transitions} exceeds C^2*|E| = {cap}"
            )

    def alphabet(self) -> Alphabet:
        return Alphabet(
            input_events=tuple(f"I{i + 1}" for i in range(self.num_input_events))
            if self.num_input_events > 1 else ("R",),
            output_events=tuple(f"O{i + 1}" for i in range(self.num_output_events))
            if self.num_output_events > 1 else ("A",),
            input_vars=tuple(f"x{i + 1}" for i in range(self.num_input_vars)),
            output_vars=tuple(f"z{i + 1}" for i in range(self.num_output_vars)),
        )


def _random_guard(num_vars: int, rng: random.Random) -> GuardExpr:
    if rng.random() < 0.5 or num_vars == 0:
        return GVar(rng.randrange(num_vars))
    # a random tree of up to 3 nodes
    shape = rng.choice(["not", "and", "or", "notnot"])
    a = GVar(rng.randrange(num_vars))
    b = GVar(rng.randrange(num_vars))
    if shape == "not":
        return GNot(a)
    if shape == "and":
        return GAnd(a, b)
    if shape == "or":
        return GOr(a, b)
    return GNot(GNot(a)) if rng.random() < 0.5 else GAnd(GNot(a) if rng.random() < 0.5 else a, b)


def _guard_table(guard: GuardExpr, num_vars: int) -> Tuple[bool, ...]:
    import itertools
    return tuple(guard.eval(bits)
                 for bits in itertools.product((False, True), repeat=num_vars))


def random_automaton(config: RandomMachineConfig, rng: random.Random) -> Automaton:
    """A connected random machine with the configured shape.

    Every state gets a real output event (scenario trees require passive
    steps to keep output values, so silent states would make simulated data
    unusable for inference).  Transitions are capped per state so the
    target always fits the default encoding width.
    """
    alphabet = config.alphabet()
    per_state_cap = config.num_states * config.num_input_events
    for _ in range(config.max_retries):
        events = [rng.choice(alphabet.output_events) for _ in range(config.num_states)]
        algorithms = [
            Algorithm(tuple((rng.random() < 0.5, rng.random() < 0.5)
                            for _ in range(config.num_output_vars)))
            for _ in range(config.num_states)
        ]
        transitions: List[List[Transition]] = [[] for _ in range(config.num_states)]
        tables: List[set] = [set() for _ in range(config.num_states)]
        for _ in range(config.max_transitions):
            src = rng.randrange(config.num_states)
            if len(transitions[src]) >= per_state_cap:
                continue
            dest = rng.randrange(config.num_states)
            event = rng.choice(alphabet.input_events)
            guard = _random_guard(config.num_input_vars, rng)
            key = (event, _guard_table(guard, config.num_input_vars))
            if key in tables[src]:
                continue  # exact duplicate of an existing transition
            tables[src].add(key)
            transitions[src].append(Transition(dest, event, guard))

        # reconnect unreachable states by redirecting random transitions
        for _ in range(4 * config.num_states):
            reachable = _reachable(transitions)
            if len(reachable) == config.num_states:
                break
            unreachable = [q for q in range(config.num_states) if q not in reachable]
            candidates = [(q, i) for q in reachable for i in range(len(transitions[q]))]
            if not candidates:
                break
            q, i = candidates[rng.randrange(len(candidates))]
            old = transitions[q][i]
            transitions[q][i] = Transition(rng.choice(unreachable), old.input_event, old.guard)
        else:
            continue
        if len(_reachable(transitions)) != config.num_states:
            continue
        return Automaton(alphabet, tuple(
            State(events[q], algorithms[q], tuple(transitions[q]))
            for q in range(config.num_states)))
    raise GenerationFailedError(
        f"could not generate a connected machine in {config.max_retries} tries"
    )


def _reachable(transitions: Sequence[Sequence[Transition]]) -> set:
    seen = {0}
    frontier = [0]
    while frontier:
        q = frontier.pop()
        for t in transitions[q]:
            if t.dest not in seen:
                seen.add(t.dest)
                frontier.append(t.dest)
    return seen


def simulate_scenarios(automaton: Automaton, count: int, length: int,
                       rng: random.Random) -> List[Scenario]:
    """Random walks from the initial configuration (a plant with random
    dynamics): each element draws a random input event and input values and
    records the machine's reaction, including silent ones."""
    alphabet = automaton.alphabet
    scenarios = []
    for _ in range(count):
        state, outputs = 0, automaton.initial_outputs()
        elements = []
        for _ in range(length):
            action = InputAction(
                rng.choice(alphabet.input_events),
                tuple(rng.random() < 0.5 for _ in range(alphabet.num_inputs)),
            )
            state, out = automaton.step(state, outputs, action)
            outputs = out.values
            elements.append((action, out))
        scenarios.append(tuple(elements))
    return scenarios


def forward_check(candidate: Automaton, validation: Sequence[Scenario]) -> float:
    """Percentage of validation scenarios the candidate satisfies in full."""
    if not validation:
        raise ValueError("empty validation set")
    good = sum(1 for s in validation if candidate.satisfies(s))
    return 100.0 * good / len(validation)


@dataclass(frozen=True)
class StudyConfig:
    machine: RandomMachineConfig
    train_count: int
    train_length: int
    valid_count: int
    valid_length: int
    seed: int
    repetitions: int = 10
    method: str = "extended-min"  # basic-min | extended-min | extended-min-ub
    guard_nodes: int = 3  # starting P for extended-min
    guard_nodes_cap: int = 12  # escalation limit when P proves too small
    plateau_width: Optional[int] = 2


@dataclass
class StudyRow:
    index: int
    seed: int
    status: str  # "ok" or an error summary
    solve_seconds: float
    num_states: Optional[int] = None
    guard_nodes_max: Optional[int] = None
    guard_nodes_total: Optional[int] = None
    percent: Optional[float] = None


@dataclass
class StudyReport:
    config: StudyConfig
    rows: List[StudyRow]
    notes: str = GENERATOR_NOTES

    @property
    def ok_rows(self) -> List[StudyRow]:
        return [r for r in self.rows if r.status == "ok"]

    @property
    def mean_seconds(self) -> float:
        rows = self.ok_rows
        return statistics.fmean(r.solve_seconds for r in rows) if rows else 0.0

    @property
    def stddev_seconds(self) -> float:
        rows = self.ok_rows
        if len(rows) < 2:
            return 0.0
        return statistics.stdev(r.solve_seconds for r in rows)

    @property
    def mean_percent(self) -> float:
        rows = self.ok_rows
        return statistics.fmean(r.percent for r in rows) if rows else 0.0

    @property
    def fully_validated(self) -> int:
        return sum(1 for r in self.ok_rows if r.percent == 100.0)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["index", "seed", "status", "solve_seconds",
                         "num_states", "guard_nodes_max", "guard_nodes_total",
                         "percent"])
        for r in self.rows:
            writer.writerow([r.index, r.seed, r.status, f"{r.solve_seconds:.3f}",
                             r.num_states, r.guard_nodes_max, r.guard_nodes_total,
                             r.percent])
        return out.getvalue()

    def summary(self) -> str:
        cfg = self.config
        lines = [
            f"method={cfg.method} seed={cfg.seed} repetitions={cfg.repetitions}",
            f"target: C={cfg.machine.num_states} T<={cfg.machine.max_transitions} "
            f"|X|={cfg.machine.num_input_vars} |Z|={cfg.machine.num_output_vars}",
            f"|S|={cfg.train_count} |s|={cfg.train_length} "
            f"|X|={cfg.machine.num_input_vars} "
            f"t={self.mean_seconds:.2f}s sigma={self.stddev_seconds:.2f}s "
            f"p={self.mean_percent:.1f}% 100%p={self.fully_validated}/{len(self.ok_rows)}",
            f"notes: {self.notes}",
        ]
        return "\n".join(lines)


def run_study(config: StudyConfig,
              options: Optional[SynthesisOptions] = None) -> StudyReport:
    """Generate -> simulate -> infer -> validate, ``repetitions`` times.

    Per-row failures are recorded in the report, not raised.  A fixed seed
    makes the whole report reproducible byte for byte.
    """
    options = options or SynthesisOptions()
    master = random.Random(config.seed)
    rep_seeds = [master.randrange(2 ** 63) for _ in range(config.repetitions)]
    rows: List[StudyRow] = []
    for i, rep_seed in enumerate(rep_seeds):
        rng = random.Random(rep_seed)
        row = StudyRow(index=i + 1, seed=rep_seed, status="ok", solve_seconds=0.0)
        rows.append(row)
        try:
            target = random_automaton(config.machine, rng)
            training = simulate_scenarios(target, config.train_count,
                                          config.train_length, rng)
            validation = simulate_scenarios(target, config.valid_count,
                                            config.valid_length, rng)
            alphabet = target.alphabet
            start = time.perf_counter()
            result = _infer(alphabet, training, config, options)
            row.solve_seconds = time.perf_counter() - start
            row.num_states = result.num_states
            row.guard_nodes_max = result.guard_nodes_max
            row.guard_nodes_total = result.guard_nodes_total
            row.percent = forward_check(result.automaton, validation)
        except Exception as exc:  # recorded, not fatal
            row.status = f"{type(exc).__name__}: {exc}"
    return StudyReport(config=config, rows=rows)


def _infer(alphabet: Alphabet, training: Sequence[Scenario], config: StudyConfig,
           options: SynthesisOptions) -> SynthesisResult:
    if config.method == "basic-min":
        return basic_min(alphabet, training, options)
    if config.method == "extended-min":
        guard_nodes = config.guard_nodes
        while True:
            result = extended_min(alphabet, training, guard_nodes, options)
            if result is not None:
                return result
            guard_nodes += 1
            if guard_nodes > config.guard_nodes_cap:
                raise GenerationFailedError(
                    f"no machine within guard budget {config.guard_nodes_cap}"
                )
    if config.method == "extended-min-ub":
        return extended_min_ub(alphabet, training, config.plateau_width, options)
    raise ValueError(f"unknown method {config.method!r}")
