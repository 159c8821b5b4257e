"""Independent oracles the tests check the production code against.

Everything here recomputes answers by brute force: machine enumeration for
minimality claims, direct automaton acceptance on lassos for the Buchi
construction, and an exhaustive sweep for the automatic guard-budget search.
None of it shares code with the paths it validates.
"""

import itertools
import random

from eccsynth.automaton import (
    Algorithm,
    Alphabet,
    Automaton,
    GAnd,
    GNot,
    GOr,
    GVar,
    InputAction,
    State,
    Transition,
)
from eccsynth.synthesis import basic_min_star, extended_min


def enumerate_small_machines(alphabet: Alphabet, num_states, max_per_state,
                             guards):
    """Every machine with the given states, per-state transition cap and
    guard pool (priority order matters, so ordered tuples)."""
    num_out = alphabet.num_outputs
    events = [None] + list(alphabet.output_events)
    algorithms = [Algorithm(pairs) for pairs in itertools.product(
        itertools.product((False, True), repeat=2), repeat=num_out)]
    choices = [(dest, ev, g)
               for dest in range(num_states)
               for ev in alphabet.input_events
               for g in guards]
    transition_lists = []
    for count in range(max_per_state + 1):
        transition_lists.extend(itertools.permutations(choices, count))

    state_options = [
        State(ev, algo, tuple(Transition(*t) for t in ts))
        for ev in events
        for algo in algorithms
        for ts in transition_lists
    ]
    for combo in itertools.product(state_options, repeat=num_states):
        yield Automaton(alphabet, combo)


def table_guards(num_inputs, inputs):
    """All guards-as-truth-tables over the given input vectors, realized as
    canonical DNF formulas (used for complete one-state enumeration)."""
    inputs = list(inputs)
    guards = []
    for rows in itertools.product((False, True), repeat=len(inputs)):
        if not any(rows):
            continue
        minterms = []
        for u, row in zip(inputs, rows):
            if not row:
                continue
            term = None
            for x in range(num_inputs):
                lit = GVar(x) if u[x] else GNot(GVar(x))
                term = lit if term is None else GAnd(term, lit)
            minterms.append(term)
        guard = minterms[0]
        for term in minterms[1:]:
            guard = GOr(guard, term)
        guards.append(guard)
    return guards


def brute_force_min_states(alphabet, scenarios, max_states, max_per_state,
                           guards):
    """Smallest C any enumerated machine satisfies all scenarios with."""
    for num_states in range(1, max_states + 1):
        for machine in enumerate_small_machines(alphabet, num_states,
                                                max_per_state, guards):
            if machine.satisfies_all(scenarios):
                return num_states
    return None


def brute_force_min_transitions(alphabet, scenarios, num_states, max_per_state,
                                guards):
    """Smallest total transition count among satisfying enumerated machines."""
    best = None
    for machine in enumerate_small_machines(alphabet, num_states,
                                            max_per_state, guards):
        if best is not None and machine.transition_count() >= best:
            continue
        if machine.satisfies_all(scenarios):
            best = machine.transition_count()
    return best


def sweep_min_guard_total(alphabet, scenarios, options=None):
    """Exhaustive sweep over the per-guard budget, mirroring the theoretical
    stop bound but with no plateau shortcut."""
    base = basic_min_star(alphabet, scenarios, options)
    min_transitions = base.num_transitions
    best = None
    guard_nodes = 0
    max_guard = max((t.guard.size() for s in base.automaton.states
                     for t in s.transitions), default=1)
    while True:
        guard_nodes += 1
        result = extended_min(alphabet, scenarios, guard_nodes, options)
        if result is not None:
            if best is None or result.guard_nodes_total < best:
                best = result.guard_nodes_total
            if guard_nodes + 1 > best - min_transitions:
                return best
        elif guard_nodes > max_guard and best is None:
            raise AssertionError("sweep found no solution at witnessed size")


def nba_accepts_lasso(nba, steps, loop_start):
    """Direct acceptance of stem+cycle^w by the Buchi automaton: reachable
    accepting node of the (position x state) graph lying on a cycle."""
    n = len(steps)
    succ_pos = [i + 1 for i in range(n)]
    succ_pos[n - 1] = loop_start

    def succs(node):
        pos, q = node
        np_ = succ_pos[pos]
        return [(np_, q2) for q2 in nba.successors[q]
                if nba.step_allows(q2, steps[np_])]

    start = [(0, q) for q in nba.initial if nba.step_allows(q, steps[0])]
    seen = set(start)
    work = list(start)
    while work:
        x = work.pop()
        for y in succs(x):
            if y not in seen:
                seen.add(y)
                work.append(y)
    for node in seen:
        if node[1] not in nba.accepting:
            continue
        stack, inner = [node], set()
        while stack:
            x = stack.pop()
            for y in succs(x):
                if y == node:
                    return True
                if y not in inner:
                    inner.add(y)
                    stack.append(y)
    return False


def random_formula_text(rng: random.Random, atoms, depth):
    if depth == 0:
        return rng.choice(atoms + ["true", "false"])
    op = rng.choice(["!", "X", "G", "F", "&", "|", "->", "U", "R"])
    if op in ("!", "X", "G", "F"):
        return f"{op}({random_formula_text(rng, atoms, depth - 1)})"
    left = random_formula_text(rng, atoms, depth - 1)
    right = random_formula_text(rng, atoms, depth - 1)
    return f"({left}) {op} ({right})"
