"""LTL to Buchi automata via the classic on-the-fly tableau construction.

States carry the literal obligations a step must satisfy to enter them;
the generalized acceptance condition (one set per Until subformula) is
degeneralized with the usual counter product.  Formulas must be in
negation normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .ltl import (
    Formula,
    LAnd,
    LFalse,
    LNext,
    LNot,
    LOr,
    LRelease,
    LTrue,
    LUntil,
    Step,
    eval_atom,
    is_atom,
    is_literal,
)


@dataclass
class _Node:
    id: int
    incoming: Set[int]
    old: FrozenSet[Formula]
    next: FrozenSet[Formula]


_INIT = 0  # pseudo-node id marking initial incoming edges


def _contradicts(f: Formula, old: Set[Formula]) -> bool:
    if isinstance(f, LFalse):
        return True
    if is_atom(f):
        return LNot(f) in old
    if isinstance(f, LNot):
        return f.operand in old
    return False


def _tableau(phi: Formula) -> List[_Node]:
    nodes: List[_Node] = []
    ids = count(1)

    def expand(incoming: Set[int], new: Set[Formula], old: Set[Formula],
               nxt: Set[Formula]):
        if not new:
            key_old, key_next = frozenset(old), frozenset(nxt)
            for node in nodes:
                if node.old == key_old and node.next == key_next:
                    node.incoming |= incoming
                    return
            node = _Node(next(ids), set(incoming), key_old, key_next)
            nodes.append(node)
            expand({node.id}, set(key_next), set(), set())
            return
        f = next(iter(new))
        rest = new - {f}
        if isinstance(f, LTrue):
            expand(incoming, rest, old | {f}, nxt)
        elif isinstance(f, LFalse) or (is_literal(f) and _contradicts(f, old)):
            return  # inconsistent branch
        elif is_literal(f):
            expand(incoming, rest, old | {f}, nxt)
        elif isinstance(f, LAnd):
            expand(incoming, rest | ({f.left, f.right} - old), old | {f}, nxt)
        elif isinstance(f, LOr):
            expand(incoming, rest | ({f.left} - old), old | {f}, nxt)
            expand(incoming, rest | ({f.right} - old), old | {f}, nxt)
        elif isinstance(f, LNext):
            expand(incoming, rest, old | {f}, nxt | {f.operand})
        elif isinstance(f, LUntil):
            expand(incoming, rest | ({f.left} - old), old | {f}, nxt | {f})
            expand(incoming, rest | ({f.right} - old), old | {f}, nxt)
        elif isinstance(f, LRelease):
            expand(incoming, rest | ({f.right} - old), old | {f}, nxt | {f})
            expand(incoming, rest | ({f.left, f.right} - old), old | {f}, nxt)
        else:
            raise TypeError(f"formula not in negation normal form: {f!r}")

    expand({_INIT}, {phi}, set(), set())
    return nodes


def _until_subformulas(phi: Formula) -> List[LUntil]:
    found: List[LUntil] = []
    seen = set()

    def walk(f: Formula):
        if f in seen:
            return
        seen.add(f)
        if isinstance(f, LUntil):
            found.append(f)
        for attr in ("operand", "left", "right"):
            child = getattr(f, attr, None)
            if child is not None:
                walk(child)

    walk(phi)
    return found


@dataclass
class BuchiAutomaton:
    """Nondeterministic Buchi automaton with obligations on state entry.

    A run over a word of steps is a state sequence q1 q2 ... where q1 is
    initial, q_{i+1} is a successor of q_i, and step i satisfies the literal
    obligations of q_i.  Acceptance: infinitely many accepting states.
    """

    num_states: int
    initial: List[int]
    successors: List[List[int]]  # per state id
    literals: List[List[Formula]]  # per state id, entry obligations
    accepting: Set[int]

    def step_allows(self, state: int, step: Step) -> bool:
        for lit in self.literals[state]:
            if isinstance(lit, LNot):
                if eval_atom(lit.operand, step):
                    return False
            elif not eval_atom(lit, step):
                return False
        return True


def ltl_to_buchi(phi_nnf: Formula) -> BuchiAutomaton:
    """Degeneralized Buchi automaton accepting exactly the models of the formula."""
    nodes = _tableau(phi_nnf)
    untils = _until_subformulas(phi_nnf)
    m = len(untils)

    raw_succ: Dict[int, List[int]] = {n.id: [] for n in nodes}
    raw_init: List[int] = []
    for node in nodes:
        for src in node.incoming:
            if src == _INIT:
                raw_init.append(node.id)
            else:
                raw_succ[src].append(node.id)
    raw_lits = {n.id: sorted((f for f in n.old if is_literal(f)), key=str)
                for n in nodes}
    # acceptance set i: nodes with no pending obligation for until i
    raw_accept: List[Set[int]] = []
    for u in untils:
        raw_accept.append({n.id for n in nodes if u not in n.old or u.right in n.old})

    if m == 0:
        id_map = {n.id: i for i, n in enumerate(nodes)}
        return BuchiAutomaton(
            num_states=len(nodes),
            initial=[id_map[i] for i in raw_init],
            successors=[[id_map[t] for t in raw_succ[n.id]] for n in nodes],
            literals=[list(raw_lits[n.id]) for n in nodes],
            accepting=set(range(len(nodes))),
        )

    # counter product: advance the counter when leaving a state in its set
    index: Dict[Tuple[int, int], int] = {}
    literals: List[List[Formula]] = []
    pairs: List[Tuple[int, int]] = []

    def state_for(nid: int, j: int) -> int:
        key = (nid, j)
        if key not in index:
            index[key] = len(pairs)
            pairs.append(key)
            literals.append(list(raw_lits[nid]))
        return index[key]

    initial = [state_for(nid, 0) for nid in raw_init]
    successors: List[List[int]] = []
    pos = 0
    while pos < len(pairs):
        nid, j = pairs[pos]
        nj = (j + 1) % m if nid in raw_accept[j] else j
        successors.append([state_for(t, nj) for t in raw_succ[nid]])
        pos += 1
    accepting = {index[nid, 0] for (nid, j) in pairs
                 if j == 0 and nid in raw_accept[0]}
    return BuchiAutomaton(
        num_states=len(pairs),
        initial=initial,
        successors=successors,
        literals=literals,
        accepting=accepting,
    )
