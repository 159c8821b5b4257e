"""Model decoding: SAT assignment -> executable machine.

After reading the structure families the decoder re-derives every guard's
truth table with the independent evaluator and compares it against the
model's table; any disagreement raises DecodeMismatchError, which traps
encoder bugs instead of letting them masquerade as synthesized behavior.
"""

from __future__ import annotations

from typing import List, Sequence

from ..automaton import (
    Algorithm,
    Automaton,
    GAnd,
    GNot,
    GOr,
    GVar,
    GuardExpr,
    State,
    Transition,
    eval_guard,
)
from ..errors import DecodeMismatchError
from .context import (
    NODE_AND,
    NODE_NONE,
    NODE_NOT,
    NODE_OR,
    NODE_TERMINAL,
    NONE_VALUE,
    EncodingContext,
)


def _decode_tree(ctx: EncodingContext, model: Sequence[bool], q: int, k: int,
                 p: int) -> GuardExpr:
    kind = ctx.nodetype[q, k][p].decode(model)
    if kind == NODE_TERMINAL:
        x = ctx.termvar[q, k][p].decode(model)
        if x is NONE_VALUE:
            raise DecodeMismatchError(f"terminal node without variable at {(q, k, p)}")
        return GVar(x)
    child = ctx.child[q, k][p].decode(model)
    if child is NONE_VALUE:
        raise DecodeMismatchError(f"operator node without child at {(q, k, p)}")
    if kind == NODE_NOT:
        return GNot(_decode_tree(ctx, model, q, k, child))
    if kind == NODE_AND:
        return GAnd(_decode_tree(ctx, model, q, k, child),
                    _decode_tree(ctx, model, q, k, child + 1))
    if kind == NODE_OR:
        return GOr(_decode_tree(ctx, model, q, k, child),
                   _decode_tree(ctx, model, q, k, child + 1))
    raise DecodeMismatchError(f"unexpected node type {kind!r} at {(q, k, p)}")


def _table_guard(ctx: EncodingContext, model: Sequence[bool], q: int, k: int) -> GuardExpr:
    """Canonical DNF over the registered inputs (basic mode).

    Each true table row becomes a full minterm over all input variables, so
    the guard is false on every input vector outside the registered set.
    """
    num_x = ctx.alphabet.num_inputs
    minterms: List[GuardExpr] = []
    for u in ctx.inputs:
        if not model[ctx.theta[q, k, u]]:
            continue
        literals = [GVar(x) if u[x] else GNot(GVar(x)) for x in range(num_x)]
        term = literals[0]
        for lit in literals[1:]:
            term = GAnd(term, lit)
        minterms.append(term)
    if not minterms:
        # never-firing guard; keep the slot faithful to the model
        return GAnd(GVar(0), GNot(GVar(0)))
    guard = minterms[-1]
    for term in reversed(minterms[:-1]):
        guard = GOr(term, guard)
    return guard


def decode_automaton(ctx: EncodingContext, model: Sequence[bool]) -> Automaton:
    states = []
    for q in ctx.states:
        output_event = ctx.ose[q].decode(model)
        algorithm = Algorithm(tuple(
            (model[ctx.alg0[q][z]], model[ctx.alg1[q][z]])
            for z in range(ctx.alphabet.num_outputs)))
        transitions = []
        for k in range(ctx.K):
            dest = ctx.dest[q][k].decode(model)
            if dest is NONE_VALUE:
                continue
            event = ctx.tie[q][k].decode(model)
            if event is NONE_VALUE:
                raise DecodeMismatchError(f"live transition {(q, k)} without event")
            if ctx.params.with_guards:
                guard = _decode_tree(ctx, model, q, k, 0)
            else:
                guard = _table_guard(ctx, model, q, k)
            transitions.append(Transition(dest=dest, input_event=event, guard=guard))
        states.append(State(
            output_event=None if output_event is NONE_VALUE else output_event,
            algorithm=algorithm,
            transitions=tuple(transitions),
        ))
    machine = Automaton(alphabet=ctx.alphabet, states=tuple(states))

    # guard/table coherence check on every registered input
    for q in ctx.states:
        live = [t for t in machine.states[q].transitions]
        slot = 0
        for k in range(ctx.K):
            if ctx.dest[q][k].decode(model) is NONE_VALUE:
                continue
            guard = live[slot].guard
            slot += 1
            for u in ctx.inputs:
                if eval_guard(guard, u) != model[ctx.theta[q, k, u]]:
                    raise DecodeMismatchError(
                        f"guard of state {q} slot {k} disagrees with its table on {u}"
                    )
    return machine
