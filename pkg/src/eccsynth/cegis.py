"""Counterexample-guided synthesis against an LTL specification.

Each iteration solves for a candidate satisfying the positive tree and the
accumulated negative tree, verifies it in the closed loop, and turns every
violated formula's counterexample into new negative-tree constraints.  The
loop solves incrementally; the one place constraints would have to weaken
(raising the guard-size bound) instead resets the solver and re-encodes
from the retained trees, which stay the single source of truth.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .automaton import Alphabet, Automaton, Scenario
from .encoding import (
    build_context,
    decode_automaton,
    encode_negative_mapping,
    guard_size_bound,
)
from .errors import EccsynthError, IterationCapExceededError, NBoundCapExceededError
from .ltl import Formula
from .scenarios import NegativeTree, PositiveTree, build_positive_tree
from .synthesis import (
    SynthesisOptions,
    SynthesisResult,
    extended_min_ub,
)
from .verifier import (
    DEFAULT_STATE_CAP,
    Counterexample,
    Plant,
    Verifier,
    counterexample_to_negative_scenario,
)

DEFAULT_ITERATION_CAP = 1000


@dataclass
class CegisIteration:
    index: int
    num_transitions: int
    guard_nodes: int
    counterexamples: int
    solve_seconds: float
    verify_seconds: float

    def format(self) -> str:
        return (f"iter {self.index}: T={self.num_transitions} N={self.guard_nodes} "
                f"cex={self.counterexamples} solve={self.solve_seconds:.3f}s "
                f"verify={self.verify_seconds:.3f}s")


@dataclass
class CegisResult:
    automaton: Automaton
    num_states: int
    num_transitions: int
    guard_nodes_total: int
    guard_nodes_max: int
    bound: Optional[int]  # final total-size bound, None when unbounded
    iterations: List[CegisIteration] = field(default_factory=list)
    scenario_phase: Optional[SynthesisResult] = None

    @property
    def num_iterations(self) -> int:
        return len(self.iterations)


@dataclass
class CegisOptions:
    synthesis: SynthesisOptions = field(default_factory=SynthesisOptions)
    max_iterations: int = DEFAULT_ITERATION_CAP
    state_cap: int = DEFAULT_STATE_CAP
    bound_ceiling: Optional[int] = None  # default C*K*P at run time
    on_iteration: Optional[callable] = None
    on_candidate: Optional[callable] = None  # (automaton, counterexamples)


def complete(alphabet: Alphabet, scenarios: Sequence[Scenario],
             negative: Sequence[Tuple[Scenario, Optional[int]]],
             num_states: int, guard_nodes: int,
             max_total_nodes: Optional[int] = None,
             options: Optional[SynthesisOptions] = None) -> Optional[Automaton]:
    """One-shot solve with both trees encoded; None on UNSAT."""
    options = options or SynthesisOptions()
    tree = build_positive_tree(alphabet, scenarios)
    neg_tree = NegativeTree(alphabet)
    new_nodes: List[int] = []
    for elements, loop_start in negative:
        new_nodes.extend(neg_tree.add_scenario(elements, loop_start))
    backend = options.backend_factory()
    ctx = build_context(backend, alphabet, options.params(num_states, guard_nodes), tree)
    encode_negative_mapping(ctx, neg_tree, new_nodes)
    if max_total_nodes is not None:
        guard_size_bound(ctx).assert_at_most(max_total_nodes)
    outcome = backend.solve_under().require_decided()
    if not outcome.is_sat:
        return None
    return decode_automaton(ctx, outcome.model)


def _run_cegis(tree: PositiveTree, formulas: Sequence[Formula], plant: Plant,
               num_states: int, guard_nodes: int, bound: Optional[int],
               neg_tree: NegativeTree, options: CegisOptions,
               iterations: List[CegisIteration]) -> Optional[Automaton]:
    """One bounded CEGIS run on a fresh solver; None means UNSAT at this bound.

    The negative tree is shared with the caller and only ever grows; on
    entry all of its current content is (re-)encoded.
    """
    backend = options.synthesis.backend_factory()
    ctx = build_context(backend, tree.alphabet,
                        options.synthesis.params(num_states, guard_nodes), tree)
    encode_negative_mapping(ctx, neg_tree, [n.id for n in neg_tree.nodes[1:]])
    if bound is not None:
        guard_size_bound(ctx).assert_at_most(bound)

    while True:
        if len(iterations) >= options.max_iterations:
            raise IterationCapExceededError(
                f"no verified machine within {options.max_iterations} iterations"
            )
        start = time.perf_counter()
        outcome = backend.solve_under().require_decided()
        solve_seconds = time.perf_counter() - start
        if not outcome.is_sat:
            return None
        candidate = decode_automaton(ctx, outcome.model)

        start = time.perf_counter()
        cexes = Verifier(candidate, plant, options.state_cap).verify(formulas)
        verify_seconds = time.perf_counter() - start

        record = CegisIteration(
            index=len(iterations) + 1,
            num_transitions=candidate.transition_count(),
            guard_nodes=candidate.guard_complexity(),
            counterexamples=len(cexes),
            solve_seconds=solve_seconds,
            verify_seconds=verify_seconds,
        )
        iterations.append(record)
        if options.on_iteration:
            options.on_iteration(record)
        if options.on_candidate:
            options.on_candidate(candidate, cexes)
        if not cexes:
            return candidate
        learned = _absorb_counterexamples(ctx, neg_tree, cexes)
        if learned == 0:
            raise EccsynthError(
                "internal error: counterexample produced no new constraints"
            )


def _absorb_counterexamples(ctx, neg_tree: NegativeTree,
                            cexes: Iterable[Counterexample]) -> int:
    learned = 0
    for cex in cexes:
        elements, loop_start = counterexample_to_negative_scenario(cex)
        new_nodes = neg_tree.add_scenario(elements, loop_start)
        learned += encode_negative_mapping(ctx, neg_tree, new_nodes)
    return learned


def complete_cegis(alphabet: Alphabet, scenarios: Sequence[Scenario],
                   formulas: Sequence[Formula], plant: Plant,
                   num_states: int, guard_nodes: int,
                   max_total_nodes: Optional[int] = None,
                   options: Optional[CegisOptions] = None,
                   neg_tree: Optional[NegativeTree] = None) -> Optional[CegisResult]:
    """CEGIS at fixed C, P and optional N; None when no machine exists there."""
    options = options or CegisOptions()
    tree = build_positive_tree(alphabet, scenarios)
    neg_tree = neg_tree if neg_tree is not None else NegativeTree(alphabet)
    iterations: List[CegisIteration] = []
    machine = _run_cegis(tree, formulas, plant, num_states, guard_nodes,
                         max_total_nodes, neg_tree, options, iterations)
    if machine is None:
        return None
    return CegisResult(
        automaton=machine,
        num_states=num_states,
        num_transitions=machine.transition_count(),
        guard_nodes_total=machine.guard_complexity(),
        guard_nodes_max=guard_nodes,
        bound=max_total_nodes,
        iterations=iterations,
    )


def complete_star_cegis(alphabet: Alphabet, scenarios: Sequence[Scenario],
                        formulas: Sequence[Formula], plant: Plant,
                        plateau_width: Optional[int] = 2,
                        options: Optional[CegisOptions] = None) -> Optional[CegisResult]:
    """Estimate C and P from scenarios alone, then CEGIS with unbounded N."""
    options = options or CegisOptions()
    base = extended_min_ub(alphabet, scenarios, plateau_width, options.synthesis)
    if _verified(base.automaton, plant, formulas, options):
        return _from_scenario_phase(base)
    return _star_loop(alphabet, scenarios, formulas, plant, base, None, options,
                      raise_on_cap=False)


def complete_star_min_cegis(alphabet: Alphabet, scenarios: Sequence[Scenario],
                            formulas: Sequence[Formula], plant: Plant,
                            plateau_width: Optional[int] = 2,
                            options: Optional[CegisOptions] = None) -> Optional[CegisResult]:
    """CEGIS that keeps the candidate minimal in total guard size.

    Starts from the scenario-only minimum (C*, P*, N*) and runs CEGIS with
    the size bound N*.  UNSAT means the specification needs more guard
    complexity than the scenarios alone: the bound rises by one and the
    solver restarts with the retained negative tree re-encoded.  The result
    is verified and carries the smallest bound for which CEGIS succeeded.
    """
    options = options or CegisOptions()
    base = extended_min_ub(alphabet, scenarios, plateau_width, options.synthesis)
    if _verified(base.automaton, plant, formulas, options):
        return _from_scenario_phase(base)
    return _star_loop(alphabet, scenarios, formulas, plant, base,
                      base.guard_nodes_total, options, raise_on_cap=True)


def _verified(machine: Automaton, plant: Plant, formulas: Sequence[Formula],
              options: CegisOptions) -> bool:
    return not Verifier(machine, plant, options.state_cap).verify(formulas)


def _from_scenario_phase(base: SynthesisResult) -> CegisResult:
    return CegisResult(
        automaton=base.automaton,
        num_states=base.num_states,
        num_transitions=base.num_transitions,
        guard_nodes_total=base.guard_nodes_total,
        guard_nodes_max=base.guard_nodes_max,
        bound=base.guard_nodes_total,
        iterations=[],
        scenario_phase=base,
    )


def _star_loop(alphabet: Alphabet, scenarios: Sequence[Scenario],
               formulas: Sequence[Formula], plant: Plant, base: SynthesisResult,
               initial_bound: Optional[int], options: CegisOptions,
               raise_on_cap: bool) -> Optional[CegisResult]:
    tree = build_positive_tree(alphabet, scenarios)
    neg_tree = NegativeTree(alphabet)
    iterations: List[CegisIteration] = []
    num_states, guard_nodes = base.num_states, base.guard_nodes_max
    params = options.synthesis.params(num_states, guard_nodes)
    ceiling = options.bound_ceiling
    if ceiling is None:
        ceiling = num_states * params.transitions_per_state(alphabet) * guard_nodes

    bound = initial_bound
    while True:
        machine = _run_cegis(tree, formulas, plant, num_states, guard_nodes,
                             bound, neg_tree, options, iterations)
        if machine is not None:
            result = CegisResult(
                automaton=machine,
                num_states=num_states,
                num_transitions=machine.transition_count(),
                guard_nodes_total=machine.guard_complexity(),
                guard_nodes_max=guard_nodes,
                bound=bound,
                iterations=iterations,
                scenario_phase=base,
            )
            return result
        if bound is None:
            return None  # unbounded run UNSAT: the spec itself is infeasible here
        # raising the bound only helps while the accumulated negative tree
        # still admits some machine at all; probe without the bound
        if not _feasible_unbounded(tree, neg_tree, num_states, guard_nodes, options):
            return None
        if bound >= ceiling:
            raise NBoundCapExceededError(
                f"guard-size bound reached its ceiling {ceiling} without a "
                f"verified machine at C={num_states}, P={guard_nodes}"
            )
        bound += 1


def _feasible_unbounded(tree: PositiveTree, neg_tree: NegativeTree,
                        num_states: int, guard_nodes: int,
                        options: CegisOptions) -> bool:
    backend = options.synthesis.backend_factory()
    ctx = build_context(backend, tree.alphabet,
                        options.synthesis.params(num_states, guard_nodes), tree)
    encode_negative_mapping(ctx, neg_tree, [n.id for n in neg_tree.nodes[1:]])
    return backend.solve_under().require_decided().is_sat
