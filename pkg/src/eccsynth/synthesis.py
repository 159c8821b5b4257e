"""Minimization drivers: smallest state count, then transition count, then
total guard size, with an automatic sweep over the per-guard node budget.

Every returned minimum carries its certificate in the verdict trail: the
last UNSAT entry at the next smaller bound.  All returned machines are
re-checked against the input scenarios with the replay oracle; the SAT
model is never trusted on its own.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

from .automaton import Alphabet, Automaton, Scenario
from .encoding import (
    EncodingParams,
    build_context,
    decode_automaton,
    guard_size_bound,
    transition_count_bound,
)
from .errors import EccsynthError
from .sat.backend import InProcessSolver, SatBackend
from .scenarios import PositiveTree, build_positive_tree


@dataclass
class SolverCall:
    """One solver invocation in a minimization trail."""

    stage: str
    params: dict
    verdict: str
    seconds: float

    def format(self) -> str:
        ps = " ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.stage} {ps} -> {self.verdict} ({self.seconds:.3f}s)"


@dataclass
class SynthesisOptions:
    backend_factory: Callable[[], SatBackend] = InProcessSolver
    max_transitions: Optional[int] = None  # K; default C * |input events|
    state_bfs: bool = True
    tree_bfs: bool = True
    amo: str = "pairwise"
    forbid_loopless_ends: bool = True
    on_call: Optional[Callable[[SolverCall], None]] = None

    def params(self, num_states: int, guard_nodes: Optional[int]) -> EncodingParams:
        return EncodingParams(
            num_states=num_states,
            max_transitions=self.max_transitions,
            guard_nodes=guard_nodes,
            state_bfs=self.state_bfs,
            tree_bfs=self.tree_bfs,
            amo=self.amo,
            forbid_loopless_ends=self.forbid_loopless_ends,
        )


@dataclass
class SynthesisResult:
    automaton: Automaton
    num_states: int
    num_transitions: int
    guard_nodes_total: int  # N of the returned machine
    guard_nodes_max: Optional[int]  # P used, None in basic (truth-table) mode
    trail: List[SolverCall] = field(default_factory=list)

    @property
    def solver_calls(self) -> int:
        return len(self.trail)

    @property
    def solve_seconds(self) -> float:
        return sum(c.seconds for c in self.trail)


class _Trail:
    def __init__(self, options: SynthesisOptions):
        self.calls: List[SolverCall] = []
        self.options = options

    def solve(self, backend: SatBackend, stage: str, params: dict):
        start = time.perf_counter()
        outcome = backend.solve_under().require_decided()
        call = SolverCall(stage, dict(params), outcome.status,
                          time.perf_counter() - start)
        self.calls.append(call)
        if self.options.on_call:
            self.options.on_call(call)
        return outcome


def _check_result(result: SynthesisResult, scenarios: Sequence[Scenario]) -> SynthesisResult:
    for i, s in enumerate(scenarios):
        if not result.automaton.satisfies(s):
            raise EccsynthError(
                f"internal error: synthesized machine fails scenario {i + 1}"
            )
    return result


def basic_min(alphabet: Alphabet, scenarios: Sequence[Scenario],
              options: Optional[SynthesisOptions] = None) -> SynthesisResult:
    """Smallest state count with truth-table guards, iterating C from 1 up.

    The UNSAT verdicts below the returned C double as the minimality
    certificate.  Always terminates: the scenario tree itself induces a
    satisfying machine with one state per active node plus the root.
    """
    options = options or SynthesisOptions()
    tree = build_positive_tree(alphabet, scenarios)
    result, _, _ = _basic_min_on(tree, options, _Trail(options), minimize_transitions=False)
    return _check_result(result, scenarios)


def basic_min_star(alphabet: Alphabet, scenarios: Sequence[Scenario],
                   options: Optional[SynthesisOptions] = None) -> SynthesisResult:
    """basic_min followed by transition-count minimization at the same C."""
    options = options or SynthesisOptions()
    tree = build_positive_tree(alphabet, scenarios)
    result, _, _ = _basic_min_on(tree, options, _Trail(options), minimize_transitions=True)
    return _check_result(result, scenarios)


def _basic_min_on(tree: PositiveTree, options: SynthesisOptions, trail: _Trail,
                  minimize_transitions: bool):
    """Returns (result, context, backend) with the context still live."""
    state_cap = len(tree.active_nodes()) + 1
    for num_states in range(1, state_cap + 1):
        backend = options.backend_factory()
        params = options.params(num_states, None)
        ctx = build_context(backend, tree.alphabet, params, tree)
        outcome = trail.solve(backend, "basic", {"C": num_states})
        if not outcome.is_sat:
            continue
        machine = decode_automaton(ctx, outcome.model)
        if minimize_transitions:
            bound = transition_count_bound(ctx)
            count = ctx.count_transitions(outcome.model)
            while count > 0:
                bound.assert_at_most(count - 1)
                probe = trail.solve(backend, "basic-T",
                                    {"C": num_states, "T": count - 1})
                if not probe.is_sat:
                    break
                outcome = probe
                machine = decode_automaton(ctx, outcome.model)
                count = ctx.count_transitions(outcome.model)
        result = SynthesisResult(
            automaton=machine,
            num_states=num_states,
            num_transitions=machine.transition_count(),
            guard_nodes_total=machine.guard_complexity(),
            guard_nodes_max=None,
            trail=trail.calls,
        )
        return result, ctx, backend
    raise EccsynthError("no machine found up to the structural state cap")


def extended(alphabet: Alphabet, scenarios: Sequence[Scenario], num_states: int,
             guard_nodes: int, max_total_nodes: Optional[int] = None,
             options: Optional[SynthesisOptions] = None) -> Optional[SynthesisResult]:
    """One-shot solve at fixed C and P with an optional total-size bound N.

    Returns None on UNSAT.
    """
    options = options or SynthesisOptions()
    tree = build_positive_tree(alphabet, scenarios)
    trail = _Trail(options)
    backend = options.backend_factory()
    ctx = build_context(backend, alphabet, options.params(num_states, guard_nodes), tree)
    if max_total_nodes is not None:
        guard_size_bound(ctx).assert_at_most(max_total_nodes)
    outcome = trail.solve(backend, "extended",
                          {"C": num_states, "P": guard_nodes,
                           "N": max_total_nodes if max_total_nodes is not None else "inf"})
    if not outcome.is_sat:
        return None
    machine = decode_automaton(ctx, outcome.model)
    return _check_result(SynthesisResult(
        automaton=machine,
        num_states=num_states,
        num_transitions=machine.transition_count(),
        guard_nodes_total=machine.guard_complexity(),
        guard_nodes_max=guard_nodes,
        trail=trail.calls,
    ), scenarios)


def extended_min(alphabet: Alphabet, scenarios: Sequence[Scenario], guard_nodes: int,
                 options: Optional[SynthesisOptions] = None) -> Optional[SynthesisResult]:
    """Minimal total guard size at the estimated minimal state count.

    C comes from basic_min; the total typed-node count N is then tightened
    on one incremental context until UNSAT.  Returns None when P is too
    small for any machine at that C.
    """
    options = options or SynthesisOptions()
    tree = build_positive_tree(alphabet, scenarios)
    trail = _Trail(options)
    basic_result, _, _ = _basic_min_on(tree, options, trail, minimize_transitions=False)
    result = _extended_min_at(tree, basic_result.num_states, guard_nodes, options, trail)
    return _check_result(result, scenarios) if result else None


def _extended_min_at(tree: PositiveTree, num_states: int, guard_nodes: int,
                     options: SynthesisOptions, trail: _Trail) -> Optional[SynthesisResult]:
    backend = options.backend_factory()
    ctx = build_context(backend, tree.alphabet,
                        options.params(num_states, guard_nodes), tree)
    bound = guard_size_bound(ctx)
    outcome = trail.solve(backend, "extended",
                          {"C": num_states, "P": guard_nodes, "N": "inf"})
    if not outcome.is_sat:
        return None
    machine = decode_automaton(ctx, outcome.model)
    count = ctx.count_typed_nodes(outcome.model)
    while count > 0:
        bound.assert_at_most(count - 1)
        probe = trail.solve(backend, "extended-N",
                            {"C": num_states, "P": guard_nodes, "N": count - 1})
        if not probe.is_sat:
            break
        outcome = probe
        machine = decode_automaton(ctx, outcome.model)
        count = ctx.count_typed_nodes(outcome.model)
    return SynthesisResult(
        automaton=machine,
        num_states=num_states,
        num_transitions=machine.transition_count(),
        guard_nodes_total=machine.guard_complexity(),
        guard_nodes_max=guard_nodes,
        trail=trail.calls,
    )


def extended_min_ub(alphabet: Alphabet, scenarios: Sequence[Scenario],
                    plateau_width: Optional[int] = 2,
                    options: Optional[SynthesisOptions] = None) -> SynthesisResult:
    """Fully automatic minimization: sweep P upward tracking the best N.

    The sweep stops once the next P cannot beat the best found total
    (ideally one guard of size P and the rest single terminals, which needs
    P <= N_best - T_min), or earlier when ``plateau_width`` successive
    sweeps return equal N (pass None for the exhaustive sweep).  With
    ``plateau_width=0`` the first satisfiable P wins.
    """
    options = options or SynthesisOptions()
    tree = build_positive_tree(alphabet, scenarios)
    trail = _Trail(options)
    base, _, _ = _basic_min_on(tree, options, trail, minimize_transitions=True)
    min_states, min_transitions = base.num_states, base.num_transitions
    # the truth-table machine rewritten as formulas witnesses satisfiability
    # once P reaches its widest guard, so the sweep always meets a SAT
    sat_by = max((t.guard.size() for s in base.automaton.states
                  for t in s.transitions), default=1)

    best: Optional[SynthesisResult] = None
    previous_total: Optional[int] = None
    plateau = 0
    guard_nodes = 0
    while True:
        guard_nodes += 1
        result = _extended_min_at(tree, min_states, guard_nodes, options, trail)
        if result is None:
            if best is None and guard_nodes > sat_by:
                raise EccsynthError(
                    "internal error: no solution at the witnessed guard size"
                )
            continue
        total = result.guard_nodes_total
        if best is None or total < best.guard_nodes_total:
            best = result
        if previous_total is not None and total == previous_total:
            plateau += 1
        else:
            plateau = 0
        previous_total = total
        if plateau_width is not None and plateau >= plateau_width:
            break
        if guard_nodes + 1 > best.guard_nodes_total - min_transitions:
            break
    best.trail = trail.calls
    return _check_result(best, scenarios)
