"""Closed-loop LTL verification with a built-in explicit-state checker.

The candidate machine runs in a loop with a plant model: the plant reacts
to the controller's last output action by (nondeterministically) moving and
emitting the next input action.  Safety formulas of shape G(propositional)
are checked by plain reachability and yield loopless counterexamples
(finite bad prefixes); everything else goes through a Buchi automaton for
the negated formula, a product with the closed loop, and a nested-DFS
emptiness check yielding lasso counterexamples.

A counterexample fixes one plant branch per step (the recorded input
actions), so replaying it on the machine is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

from .automaton import Alphabet, Automaton, Bits, InputAction, OutputAction
from .buchi import BuchiAutomaton, ltl_to_buchi
from .errors import PlantDeadlockError, StateSpaceExceededError
from .ltl import (
    Formula,
    LGlobally,
    Step,
    eval_propositional,
    evaluate_lasso,
    is_propositional,
    nnf,
    parse_ltl,
)

DEFAULT_STATE_CAP = 10 ** 6


class Plant:
    """Environment model: reacts to the controller's last output action."""

    def initial_state(self) -> Hashable:
        raise NotImplementedError

    def respond(self, state: Hashable, last_output: OutputAction
                ) -> Sequence[Tuple[Hashable, InputAction]]:
        """Nonempty set of (next plant state, emitted input action)."""
        raise NotImplementedError


class FreePlant(Plant):
    """Unconstrained environment: any input event with any input values."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._responses = [
            ((), InputAction(e, bits))
            for e in alphabet.input_events
            for bits in itertools.product((False, True), repeat=alphabet.num_inputs)
        ]

    def initial_state(self):
        return ()

    def respond(self, state, last_output):
        return self._responses


@dataclass(frozen=True)
class PlantRule:
    """One response line of a table plant.

    ``output_event`` matches the controller's last output event ("*" for
    any, None for the empty event); ``values_pattern`` is per output
    variable True/False/None (None = don't care).
    """

    state: str
    output_event: Optional[str]  # "*" wildcards
    values_pattern: Tuple[Optional[bool], ...]
    next_state: str
    action: InputAction

    def matches(self, output: OutputAction) -> bool:
        if self.output_event != "*":
            if self.output_event != output.event:
                return False
        for pat, val in zip(self.values_pattern, output.values):
            if pat is not None and pat != val:
                return False
        return True


class TablePlant(Plant):
    """Explicit-table plant; rules are matched in order, all matches apply."""

    def __init__(self, states: Sequence[str], initial: str, rules: Sequence[PlantRule]):
        self.states = list(states)
        self.initial = initial
        self.rules = list(rules)
        by_state: Dict[str, List[PlantRule]] = {s: [] for s in states}
        for rule in rules:
            by_state[rule.state].append(rule)
        self._by_state = by_state

    def initial_state(self):
        return self.initial

    def respond(self, state, last_output):
        out = [(r.next_state, r.action) for r in self._by_state[state]
               if r.matches(last_output)]
        if not out:
            raise PlantDeadlockError(
                f"plant state {state!r} has no response to {last_output}"
            )
        return out


@dataclass(frozen=True)
class LoopConfig:
    """One closed-loop configuration.

    The last output action is part of the configuration because the plant's
    next move may depend on it.
    """

    ctrl_state: int
    outputs: Bits
    last_event: Optional[str]
    plant_state: Hashable


@dataclass
class ClosedLoop:
    """Lazily explored product of a machine and a plant."""

    automaton: Automaton
    plant: Plant

    def initial(self) -> LoopConfig:
        return LoopConfig(0, self.automaton.initial_outputs(), None,
                          self.plant.initial_state())

    def successors(self, config: LoopConfig) -> List[Tuple[Step, LoopConfig]]:
        last_output = OutputAction(config.last_event, config.outputs)
        out = []
        for plant_next, action in self.plant.respond(config.plant_state, last_output):
            state, emitted = self.automaton.step(config.ctrl_state, config.outputs, action)
            step: Step = (action, emitted)
            out.append((step, LoopConfig(state, emitted.values, emitted.event, plant_next)))
        return out


@dataclass
class Counterexample:
    """A violating run: finite prefix, or a lasso when loop_start is set.

    ``loop_start`` is 1-based: the configuration reached after element
    ``loop_start`` is the one the run returns to after the last element.
    """

    trace: Tuple[Step, ...]
    loop_start: Optional[int]
    formula: Formula

    @property
    def is_looping(self) -> bool:
        return self.loop_start is not None


def counterexample_to_negative_scenario(cex: Counterexample
                                        ) -> Tuple[Tuple[Step, ...], Optional[int]]:
    """Negative-scenario form: the elements verbatim plus the loop index."""
    return cex.trace, cex.loop_start


def counterexample_violates(cex: Counterexample, formula: Formula) -> bool:
    """Direct-semantics check that the trace indeed violates the formula."""
    if cex.loop_start is not None:
        return not evaluate_lasso(formula, cex.trace, cex.loop_start - 1)
    # loopless counterexamples arise from G(propositional) only: the prefix
    # is bad iff some step falsifies the body
    if isinstance(formula, LGlobally) and is_propositional(formula.operand):
        return any(not eval_propositional(formula.operand, s) for s in cex.trace)
    return False


class Verifier:
    """Checks formulas against the closed loop; shortens found witnesses.

    Emptiness is decided by nested DFS.  When a violation is found and the
    product is small enough, the reported lasso is replaced by a shortest
    one (breadth-first over the explicit product); minimality is a
    reporting nicety, not something callers may rely on.
    """

    def __init__(self, automaton: Automaton, plant: Plant,
                 state_cap: int = DEFAULT_STATE_CAP,
                 shorten_below: int = 20_000):
        self.loop = ClosedLoop(automaton, plant)
        self.state_cap = state_cap
        self.shorten_below = shorten_below

    def _guard_cap(self, seen_count: int):
        if seen_count > self.state_cap:
            raise StateSpaceExceededError(
                f"closed-loop product exceeded {self.state_cap} states"
            )

    def check(self, formula: Formula) -> Optional[Counterexample]:
        """None when the closed loop satisfies the formula, else a witness."""
        if isinstance(formula, LGlobally) and is_propositional(formula.operand):
            return self._check_safety(formula)
        return self._check_buchi(formula)

    def verify(self, formulas: Iterable[Formula]) -> List[Counterexample]:
        """One counterexample per violated formula."""
        out = []
        for f in formulas:
            cex = self.check(f)
            if cex is not None:
                out.append(cex)
        return out

    # -- safety by reachability -------------------------------------------

    def _check_safety(self, formula: LGlobally) -> Optional[Counterexample]:
        body = formula.operand
        init = self.loop.initial()
        seen: Set[LoopConfig] = {init}
        frontier: List[Tuple[LoopConfig, Tuple[Step, ...]]] = [(init, ())]
        while frontier:
            next_frontier = []
            for config, path in frontier:
                for step, succ in self.loop.successors(config):
                    if not eval_propositional(body, step):
                        return Counterexample(path + (step,), None, formula)
                    if succ not in seen:
                        seen.add(succ)
                        self._guard_cap(len(seen))
                        next_frontier.append((succ, path + (step,)))
            frontier = next_frontier
        return None

    # -- liveness by nested DFS on the Buchi product -----------------------

    def _product_successors(self, nba: BuchiAutomaton, config: LoopConfig,
                            bstate: Optional[int]):
        succs = nba.initial if bstate is None else nba.successors[bstate]
        for step, next_config in self.loop.successors(config):
            for nb in succs:
                if nba.step_allows(nb, step):
                    yield step, (next_config, nb)

    def _check_buchi(self, formula: Formula) -> Optional[Counterexample]:
        nba = ltl_to_buchi(nnf(formula, negate=True))
        init = (self.loop.initial(), None)
        visited: Set = {init}
        flagged: Set = set()  # shared across all inner searches

        def inner_search(seed) -> Optional[List[Step]]:
            """Path of steps from seed back to seed, or None."""
            flagged.add(seed)
            stack = [(seed, iter(self._product_successors(nba, *seed)))]
            steps: List[Step] = []
            while stack:
                _, it = stack[-1]
                advanced = False
                for step, succ in it:
                    if succ == seed:
                        return steps + [step]
                    if succ not in flagged:
                        flagged.add(succ)
                        steps.append(step)
                        stack.append((succ, iter(self._product_successors(nba, *succ))))
                        advanced = True
                        break
                if not advanced:
                    stack.pop()
                    if steps:
                        steps.pop()
            return None

        # outer DFS; accepting states are probed in post-order
        stack = [(init, iter(self._product_successors(nba, *init)))]
        path_steps: List[Step] = []
        while stack:
            node, it = stack[-1]
            advanced = False
            for step, succ in it:
                if succ not in visited:
                    visited.add(succ)
                    self._guard_cap(len(visited))
                    path_steps.append(step)
                    stack.append((succ, iter(self._product_successors(nba, *succ))))
                    advanced = True
                    break
            if advanced:
                continue
            _, bstate = node
            if bstate is not None and bstate in nba.accepting:
                cycle = inner_search(node)
                if cycle is not None:
                    short = self._shortest_lasso(nba)
                    if short is not None:
                        stem, cycle = short
                    else:
                        stem = list(path_steps)
                    if not stem:
                        # the lasso cycles through the initial configuration;
                        # unroll once so the loop index points at an element
                        stem = list(cycle)
                    return Counterexample(tuple(stem) + tuple(cycle),
                                          len(stem), formula)
            stack.pop()
            if path_steps:
                path_steps.pop()
        return None

    def _shortest_lasso(self, nba: BuchiAutomaton
                        ) -> Optional[Tuple[List[Step], List[Step]]]:
        """Shortest accepting stem+cycle over the explicit product, if small."""
        init = (self.loop.initial(), None)
        nodes: Dict = {init: 0}
        order = [init]
        adj: List[List[Tuple[Step, int]]] = [[]]
        pos = 0
        while pos < len(order):
            for step, succ in self._product_successors(nba, *order[pos]):
                if succ not in nodes:
                    if len(nodes) >= self.shorten_below:
                        return None
                    nodes[succ] = len(order)
                    order.append(succ)
                    adj.append([])
                adj[pos].append((step, nodes[succ]))
            pos += 1

        def bfs(starts: List[int]) -> Tuple[List[Optional[int]], List[Optional[Tuple[Step, int]]]]:
            dist: List[Optional[int]] = [None] * len(order)
            back: List[Optional[Tuple[Step, int]]] = [None] * len(order)
            frontier = list(starts)
            for s in starts:
                dist[s] = 0
            while frontier:
                nxt = []
                for v in frontier:
                    for step, w in adj[v]:
                        if dist[w] is None:
                            dist[w] = dist[v] + 1
                            back[w] = (step, v)
                            nxt.append(w)
                frontier = nxt
            return dist, back

        dist0, back0 = bfs([0])
        best = None  # (total, stem_len, accepting node, cycle info)
        for v in range(len(order)):
            _, bstate = order[v]
            if bstate is None or bstate not in nba.accepting or dist0[v] is None:
                continue
            # shortest cycle v -> v: BFS from v's successors back to v
            dist_c: List[Optional[int]] = [None] * len(order)
            back_c: List[Optional[Tuple[Step, int]]] = [None] * len(order)
            frontier = []
            for step, w in adj[v]:
                if dist_c[w] is None:
                    dist_c[w] = 1
                    back_c[w] = (step, v)
                    frontier.append(w)
            cycle_len = dist_c[v]
            while frontier and cycle_len is None:
                nxt = []
                for x in frontier:
                    for step, w in adj[x]:
                        if dist_c[w] is None:
                            dist_c[w] = dist_c[x] + 1
                            back_c[w] = (step, x)
                            nxt.append(w)
                            if w == v:
                                break
                frontier = nxt
                cycle_len = dist_c[v]
            if cycle_len is None:
                continue
            key = (dist0[v] + cycle_len, dist0[v])
            if best is None or key < best[0]:
                stem_steps = _walk_back(back0, v)
                cycle_steps = _walk_back(back_c, v)
                best = (key, stem_steps, cycle_steps)
        if best is None:
            return None
        return best[1], best[2]


def _walk_back(back, v) -> List[Step]:
    steps = []
    cur = v
    while back[cur] is not None:
        step, prev = back[cur]
        steps.append(step)
        cur = prev
        if cur == v:
            break
    steps.reverse()
    return steps


def verify(automaton: Automaton, plant: Plant, formulas: Iterable[Formula],
           state_cap: int = DEFAULT_STATE_CAP) -> List[Counterexample]:
    return Verifier(automaton, plant, state_cap).verify(formulas)


# -- independent emptiness check (used as a cross-check in tests) ------------


def product_scc_accepting_cycle(automaton: Automaton, plant: Plant,
                                formula: Formula,
                                state_cap: int = DEFAULT_STATE_CAP) -> bool:
    """True iff the product with the negated formula has an accepting cycle.

    Builds the whole product graph explicitly and enumerates its strongly
    connected components; independent of the nested-DFS path.
    """
    nba = ltl_to_buchi(nnf(formula, negate=True))
    loop = ClosedLoop(automaton, plant)
    init = (loop.initial(), None)
    nodes: Dict = {init: 0}
    adj: List[List[int]] = [[]]
    order = [init]
    pos = 0
    while pos < len(order):
        config, bstate = order[pos]
        succs = nba.initial if bstate is None else nba.successors[bstate]
        for step, next_config in loop.successors(config):
            for nb in succs:
                if not nba.step_allows(nb, step):
                    continue
                key = (next_config, nb)
                if key not in nodes:
                    if len(nodes) >= state_cap:
                        raise StateSpaceExceededError(
                            f"product exceeded {state_cap} states")
                    nodes[key] = len(order)
                    order.append(key)
                    adj.append([])
                adj[pos].append(nodes[key])
        pos += 1

    n = len(order)
    index = [0] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    counter = [1]
    comp_count = [0]
    stack: List[int] = []

    def strongconnect(root: int):
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter[0]
                counter[0] += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if index[w] == 0:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                cid = comp_count[0]
                comp_count[0] += 1
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = cid
                    if w == v:
                        break
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    for v in range(n):
        if index[v] == 0:
            strongconnect(v)

    # an accepting state lies on a cycle iff its SCC has more than one node
    # or it carries a self-loop
    comp_size = [0] * comp_count[0]
    for v in range(n):
        comp_size[comp[v]] += 1
    for v in range(n):
        _, bstate = order[v]
        if bstate is not None and bstate in nba.accepting:
            if comp_size[comp[v]] > 1 or v in adj[v]:
                return True
    return False
