"""CNF constraints of the reduction.

The reduction has four parts: automaton structure, positive-tree mapping,
guard parse-tree structure, and negative-tree mapping, plus BFS symmetry
breaking for state and parse-tree numbering.  Every bounded domain is a
one-hot family owned by the context; helper implications keep the clause
shapes small and regular.

Input-indexed columns (guard truth tables, first-fired chains, the reaction
function, parse-tree node values) are emitted per registered input vector,
so the instance can absorb counterexample inputs incrementally.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from ..automaton import Bits
from ..errors import StructuralError
from ..scenarios import NegativeTree, PositiveTree, TreeNode
from .context import (
    NODE_AND,
    NODE_NONE,
    NODE_NOT,
    NODE_OR,
    NODE_TERMINAL,
    NODE_TYPES,
    NONE_VALUE,
    EncodingContext,
)


def encode_automaton_structure(ctx: EncodingContext):
    """Declare state/transition families and their structural clauses."""
    if ctx._structure_done:
        raise StructuralError("structure already encoded")
    C, K = ctx.C, ctx.K
    out_events = [NONE_VALUE] + list(ctx.alphabet.output_events)

    for q in range(C):
        # state output event and per-variable algorithm bits; unconstrained
        # algorithm bits prefer "keep" so decoded machines stay deterministic
        ctx.ose.append(ctx.new_onehot(out_events, preferred=NONE_VALUE))
        ctx.alg0.append([ctx.backend.new_var(polarity=False)
                         for _ in range(ctx.alphabet.num_outputs)])
        ctx.alg1.append([ctx.backend.new_var(polarity=True)
                         for _ in range(ctx.alphabet.num_outputs)])
        ctx.dest.append([ctx.new_onehot([NONE_VALUE] + ctx.states, preferred=NONE_VALUE)
                         for _ in range(K)])
        ctx.tie.append([ctx.new_onehot([NONE_VALUE] + ctx.events, preferred=NONE_VALUE)
                        for _ in range(K)])

    for q in range(C):
        for k in range(K):
            # 1. null transition slots sit at the largest indices
            if k + 1 < K:
                ctx.imply(ctx.dest[q][k].var(NONE_VALUE), ctx.dest[q][k + 1].var(NONE_VALUE))
            # 2. null transitions carry the empty input event, real ones don't
            ctx.iff(ctx.dest[q][k].var(NONE_VALUE), ctx.tie[q][k].var(NONE_VALUE))
            # 3. reactions always emit a real event: a state entered through a
            # transition cannot carry the empty output event (the execution
            # model has no silent state changes; the empty event only ever
            # means "ignored, stayed put")
            for q2 in range(C):
                ctx.clause(-ctx.dest[q][k].var(q2), -ctx.ose[q2].var(NONE_VALUE))

    ctx._structure_done = True


def encode_guard_trees(ctx: EncodingContext):
    """Declare parse-tree families per transition slot and their shape clauses.

    Positions are 0-based with the root at 0; children always carry larger
    positions than their parent, a binary operator's right child directly
    follows its left one, and untyped (none) positions are fully detached so
    every typed node belongs to exactly one well-formed tree.
    """
    if not ctx._structure_done:
        raise StructuralError("encode structure before guard trees")
    if not ctx.params.with_guards:
        raise StructuralError("guard trees disabled in params")
    if ctx._guards_done:
        raise StructuralError("guard trees already encoded")
    P = ctx.P
    var_values = [NONE_VALUE] + list(range(ctx.alphabet.num_inputs))

    for q in ctx.states:
        for k in range(ctx.K):
            nts = [ctx.new_onehot(NODE_TYPES, preferred=NODE_NONE) for _ in range(P)]
            tvs = [ctx.new_onehot(var_values, preferred=NONE_VALUE) for _ in range(P)]
            pars = [ctx.new_onehot([NONE_VALUE] + list(range(p)), preferred=NONE_VALUE)
                    for p in range(P)]
            chs = [ctx.new_onehot([NONE_VALUE] + list(range(p + 1, P)), preferred=NONE_VALUE)
                   for p in range(P)]
            ctx.nodetype[q, k] = nts
            ctx.termvar[q, k] = tvs
            ctx.parent[q, k] = pars
            ctx.child[q, k] = chs

            # 3. a guard tree exists exactly on non-null transitions
            ctx.iff(nts[0].var(NODE_NONE), ctx.dest[q][k].var(NONE_VALUE))

            for p in range(P):
                nt, tv, ch = nts[p], tvs[p], chs[p]
                # 4. terminal nodes and only they carry an input variable
                ctx.iff(nt.var(NODE_TERMINAL), -tv.var(NONE_VALUE))
                # 5. non-root typed nodes and only they have parents
                if p > 0:
                    ctx.iff(pars[p].var(NONE_VALUE), nt.var(NODE_NONE))
                # 6. children by node type: binary operators need room for an
                # adjacent right child, negation for one child, leaves none
                binary_range = [ch.var(c) for c in range(p + 1, P - 1)]
                ctx.clause(-nt.var(NODE_AND), *binary_range)
                ctx.clause(-nt.var(NODE_OR), *binary_range)
                ctx.clause(-nt.var(NODE_NOT), *[ch.var(c) for c in range(p + 1, P)])
                ctx.imply(nt.var(NODE_TERMINAL), ch.var(NONE_VALUE))
                ctx.imply(nt.var(NODE_NONE), ch.var(NONE_VALUE))
                for c in range(p + 1, P):
                    # 7. child link implies the matching parent link
                    ctx.imply(ch.var(c), pars[c].var(p))
                    if c + 1 < P:
                        # 8. a binary operator's right child follows the left
                        ctx.clause(-nt.var(NODE_AND), -ch.var(c), pars[c + 1].var(p))
                        ctx.clause(-nt.var(NODE_OR), -ch.var(c), pars[c + 1].var(p))

            # 9. no dangling nodes: a parent link must be mirrored by the
            # child link (directly, or shifted by one under a binary operator)
            for c in range(1, P):
                for p in range(c):
                    par_lit = pars[c].var(p)
                    allowed = [chs[p].var(c)]
                    if c - 1 > p:
                        allowed.append(chs[p].var(c - 1))
                        ctx.clause(-par_lit, -chs[p].var(c - 1),
                                   nts[p].var(NODE_AND), nts[p].var(NODE_OR))
                    ctx.clause(-par_lit, *allowed)

    ctx._guards_done = True


def emit_input_columns(ctx: EncodingContext, u: Bits):
    """Emit every per-input column of the encoding for a new input vector."""
    C, K = ctx.C, ctx.K
    for q in range(C):
        for k in range(K):
            ctx.theta[q, k, u] = ctx.backend.new_var()
        for e in ctx.events:
            # 10. a transition slot fires for an event iff it carries that
            # event and its guard is true on the input
            fire_lits = []
            for k in range(K):
                f = ctx.backend.new_var()
                ctx.fires[q, k, e, u] = f
                ctx.iff_and(f, (ctx.tie[q][k].var(e), ctx.theta[q, k, u]))
                fire_lits.append(f)
            # 11. prefix chain: no slot up to k fired for this event
            chain = []
            for k in range(K):
                nf = ctx.backend.new_var(polarity=True)
                ctx.nofire[q, e, u, k] = nf
                if k == 0:
                    ctx.iff(nf, -fire_lits[0])
                else:
                    ctx.iff_and(nf, (-fire_lits[k], chain[k - 1]))
                chain.append(nf)
            # 12. first-fired index: the lowest firing slot, 0 when none
            ff = ctx.new_onehot(list(range(K + 1)), preferred=0)
            ctx.first_fired[q, e, u] = ff
            ctx.iff(ff.var(0), chain[K - 1])
            for k in range(K):
                if k == 0:
                    ctx.iff(ff.var(1), fire_lits[0])
                else:
                    ctx.iff_and(ff.var(k + 1), (fire_lits[k], chain[k - 1]))
            # 13. reaction function: follow the first fired slot's destination
            dl = ctx.new_onehot([NONE_VALUE] + ctx.states, preferred=NONE_VALUE)
            ctx.delta[q, e, u] = dl
            ctx.imply(ff.var(0), dl.var(NONE_VALUE))
            for k in range(K):
                for qq in ctx.states:
                    ctx.clause(-ff.var(k + 1), -ctx.dest[q][k].var(qq), dl.var(qq))

    if ctx._guards_done:
        _emit_guard_value_columns(ctx, u)


def _emit_guard_value_columns(ctx: EncodingContext, u: Bits):
    P = ctx.P
    for q in ctx.states:
        for k in range(ctx.K):
            nts, tvs, chs = ctx.nodetype[q, k], ctx.termvar[q, k], ctx.child[q, k]
            vals = [ctx.backend.new_var() for _ in range(P)]
            for p in range(P):
                ctx.value[q, k, p, u] = vals[p]
            # 14. guard truth table is the root node's value
            ctx.iff(ctx.theta[q, k, u], vals[0])
            for p in range(P):
                # 15. terminal value copies the associated input bit
                for x in range(ctx.alphabet.num_inputs):
                    ctx.imply(tvs[p].var(x), vals[p] if u[x] else -vals[p])
                # 16. untyped nodes are false
                ctx.imply(nts[p].var(NODE_NONE), -vals[p])
                # 17. operator values from children values
                for c in range(p + 1, P):
                    ch_lit = chs[p].var(c)
                    if c + 1 < P:
                        a_and = (-nts[p].var(NODE_AND), -ch_lit)
                        ctx.clause(*a_and, -vals[p], vals[c])
                        ctx.clause(*a_and, -vals[p], vals[c + 1])
                        ctx.clause(*a_and, vals[p], -vals[c], -vals[c + 1])
                        a_or = (-nts[p].var(NODE_OR), -ch_lit)
                        ctx.clause(*a_or, vals[p], -vals[c])
                        ctx.clause(*a_or, vals[p], -vals[c + 1])
                        ctx.clause(*a_or, -vals[p], vals[c], vals[c + 1])
                    a_not = (-nts[p].var(NODE_NOT), -ch_lit)
                    ctx.clause(*a_not, -vals[p], -vals[c])
                    ctx.clause(*a_not, vals[p], vals[c])


def encode_state_bfs(ctx: EncodingContext):
    """Break state-renaming symmetry: states are numbered in BFS visit order.

    Also forces every state to be reachable from the initial one, which is
    harmless at and below the minimal state count.
    """
    C = ctx.C
    if C == 1:
        return
    # adjacency: some transition slot of state i targets state j
    tbfs = {}
    for j in range(1, C):
        for i in range(j):
            t = ctx.backend.new_var()
            tbfs[i, j] = t
            ctx.iff_or(t, [ctx.dest[i][k].var(j) for k in range(ctx.K)])
    pbfs = {}
    for j in range(1, C):
        ph = ctx.new_onehot(list(range(j)))
        pbfs[j] = ph
        for i in range(j):
            ctx.iff_and(ph.var(i), [tbfs[i, j]] + [-tbfs[r, j] for r in range(i)])
    for j in range(1, C - 1):
        for i in range(j):
            for r in range(i):
                ctx.clause(-pbfs[j].var(i), -pbfs[j + 1].var(r))


def encode_tree_bfs(ctx: EncodingContext):
    """Break node-renaming symmetry inside each guard parse tree.

    A node's sole incoming link is its parent, so consecutive positions must
    carry non-decreasing parent positions.
    """
    if not ctx._guards_done:
        raise StructuralError("encode guard trees before tree BFS")
    P = ctx.P
    for q in ctx.states:
        for k in range(ctx.K):
            pars = ctx.parent[q, k]
            for j in range(1, P - 1):
                for i in range(j):
                    for r in range(i):
                        ctx.clause(-pars[j].var(i), -pars[j + 1].var(r))


def encode_positive_mapping(ctx: EncodingContext, tree: PositiveTree):
    """Map positive-tree nodes to satisfying states and enforce reactions.

    Passive nodes share their parent's mapping variables outright.  Active
    nodes pin the reaction function, the destination's output event and the
    destination's algorithm on the witnessed bits.
    """
    if not ctx._structure_done:
        raise StructuralError("encode structure before mappings")
    for u in tree.unique_inputs:
        ctx.ensure_input(u)

    root_map = ctx.new_onehot(ctx.states)
    ctx.pos_map[0] = root_map
    ctx.clause(root_map.var(0))

    for node in tree.nodes[1:]:
        parent_map = ctx.pos_map[node.parent]
        e, u = node.input_event, node.input_values
        if node.is_passive:
            # same state as the parent; the machine must ignore the action
            ctx.pos_map[node.id] = parent_map
            for q in ctx.states:
                ctx.imply(parent_map.var(q), ctx.delta[q, e, u].var(NONE_VALUE))
            continue
        m = ctx.new_onehot(ctx.states)
        ctx.pos_map[node.id] = m
        for q2 in ctx.states:
            # destination state's output action matches the tree node
            ctx.imply(m.var(q2), ctx.ose[q2].var(node.output_event
                                                 if node.output_event is not None
                                                 else NONE_VALUE))
            parent_values = tree.nodes[node.parent].output_values
            for z in range(ctx.alphabet.num_outputs):
                bit_var = (ctx.alg1 if parent_values[z] else ctx.alg0)[q2][z]
                ctx.imply(m.var(q2), bit_var if node.output_values[z] else -bit_var)
            for q in ctx.states:
                dl = ctx.delta[q, e, u]
                ctx.clause(-parent_map.var(q), -m.var(q2), dl.var(q2))
                ctx.clause(-parent_map.var(q), -dl.var(q2), m.var(q2))


def encode_negative_mapping(ctx: EncodingContext, tree: NegativeTree,
                            new_nodes: Sequence[int]) -> int:
    """Map negative-tree nodes to states or to "unmapped", and prohibit loops.

    The mapping replays the machine exactly: a node is unmapped precisely
    when the machine's run diverges from the tree on the way to it.  Loop
    back edges then forbid both ends mapping to the same live state, and
    (optionally) loopless scenario ends must be unmapped.

    Called incrementally with only the nodes added since the last call;
    constraints for new back edges and loopless ends on old nodes are
    detected and emitted here as well.  Returns the number of newly encoded
    items (nodes, back edges, loopless ends); zero means the call taught the
    solver nothing.
    """
    if not ctx._structure_done:
        raise StructuralError("encode structure before mappings")
    emitted = len(new_nodes)
    for nid in new_nodes:
        ctx.ensure_input(tree.nodes[nid].input_values)

    if 0 not in ctx.neg_map:
        root_map = ctx.new_onehot([NONE_VALUE] + ctx.states)
        ctx.neg_map[0] = root_map
        ctx.clause(root_map.var(0))

    for nid in new_nodes:
        node = tree.nodes[nid]
        parent_map = ctx.neg_map[node.parent]
        m = ctx.new_onehot([NONE_VALUE] + ctx.states, preferred=NONE_VALUE)
        ctx.neg_map[nid] = m
        e, u = node.input_event, node.input_values
        # unmapped parents stay unmapped down the tree
        ctx.imply(parent_map.var(NONE_VALUE), m.var(NONE_VALUE))
        if node.is_passive:
            for q in ctx.states:
                dl = ctx.delta[q, e, u]
                # live mapping keeps the parent's state and needs an ignore
                ctx.imply(m.var(q), parent_map.var(q))
                ctx.imply(m.var(q), dl.var(NONE_VALUE))
                # and an ignore from a live parent forces the mapping
                ctx.clause(-parent_map.var(q), -dl.var(NONE_VALUE), m.var(q))
        else:
            o = node.output_event if node.output_event is not None else NONE_VALUE
            parent_values = tree.nodes[node.parent].output_values
            for q2 in ctx.states:
                ctx.imply(m.var(q2), ctx.ose[q2].var(o))
                match_lits = [ctx.ose[q2].var(o)]
                for z in range(ctx.alphabet.num_outputs):
                    bit_var = (ctx.alg1 if parent_values[z] else ctx.alg0)[q2][z]
                    lit = bit_var if node.output_values[z] else -bit_var
                    ctx.imply(m.var(q2), lit)
                    match_lits.append(lit)
                for q in ctx.states:
                    dl = ctx.delta[q, e, u]
                    ctx.clause(-parent_map.var(q), -m.var(q2), dl.var(q2))
                    # full behavioral match from a live parent forces the
                    # mapping (the iff direction that makes replay exact)
                    ctx.clause(-parent_map.var(q), -dl.var(q2),
                               *[-lit for lit in match_lits], m.var(q2))

    # loop prohibition: ends of a back edge never share a live state
    for end, start in tree.back_edges():
        if (end, start) in ctx._neg_edges_done:
            continue
        ctx._neg_edges_done.add((end, start))
        emitted += 1
        for q in ctx.states:
            ctx.clause(-ctx.neg_map[end].var(q), -ctx.neg_map[start].var(q))

    if ctx.params.forbid_loopless_ends:
        for end in sorted(tree.loopless_ends):
            if end in ctx._neg_ends_done:
                continue
            ctx._neg_ends_done.add(end)
            emitted += 1
            ctx.clause(ctx.neg_map[end].var(NONE_VALUE))
    return emitted
