"""Encoding context: SAT variable families and the clause sink.

The context owns every variable family of the reduction (state structure,
reaction function, guard parse trees, tree mappings, symmetry breaking,
cardinality sums) plus the registry of distinct inputs seen so far.  The
set of inputs can grow while solving incrementally: counterexamples may
mention input vectors absent from the positive scenarios, and every
per-input column of the encoding is emitted on registration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..automaton import Alphabet, Bits
from ..errors import StructuralError
from ..sat.backend import SatBackend

NONE_VALUE = object()  # shared marker for "no state / no event / untyped"

NODE_TERMINAL = "terminal"
NODE_AND = "and"
NODE_OR = "or"
NODE_NOT = "not"
NODE_NONE = "none"
NODE_TYPES = (NODE_TERMINAL, NODE_AND, NODE_OR, NODE_NOT, NODE_NONE)


@dataclass(frozen=True)
class EncodingParams:
    """Size and feature knobs of one reduction instance.

    ``num_states`` is C, ``max_transitions`` is K (defaults to C times the
    number of input events), ``guard_nodes`` is P.  When ``guard_nodes`` is
    None the reduction runs in basic mode: guards stay truth tables over the
    registered inputs and no parse trees are declared.
    """

    num_states: int
    max_transitions: Optional[int] = None
    guard_nodes: Optional[int] = None
    state_bfs: bool = True
    tree_bfs: bool = True
    amo: str = "pairwise"  # or "sequential"
    forbid_loopless_ends: bool = True

    def __post_init__(self):
        if self.num_states < 1:
            raise StructuralError("need at least one state")
        if self.max_transitions is not None and self.max_transitions < 1:
            raise StructuralError("need at least one transition slot")
        if self.guard_nodes is not None and self.guard_nodes < 1:
            raise StructuralError("guard parse trees need at least one node")
        if self.amo not in ("pairwise", "sequential"):
            raise StructuralError(f"unknown at-most-one encoding {self.amo!r}")

    def transitions_per_state(self, alphabet: Alphabet) -> int:
        cap = self.num_states * len(alphabet.input_events)
        if self.max_transitions is None:
            return cap
        return min(self.max_transitions, cap)

    @property
    def with_guards(self) -> bool:
        return self.guard_nodes is not None


class OneHot:
    """A bounded-domain variable in direct encoding: one SAT var per value."""

    __slots__ = ("values", "vars", "_index")

    def __init__(self, values: Sequence, vars: Sequence[int]):
        self.values = list(values)
        self.vars = list(vars)
        self._index = {id_key(v): i for i, v in enumerate(values)}

    def var(self, value) -> int:
        return self.vars[self._index[id_key(value)]]

    def has(self, value) -> bool:
        return id_key(value) in self._index

    def decode(self, model: Sequence[bool]):
        for value, var in zip(self.values, self.vars):
            if model[var]:
                return value
        raise StructuralError("one-hot family has no true variable in model")


def id_key(value):
    return value if value is not NONE_VALUE else "\0none"


class EncodingContext:
    """All SAT state for one reduction instance, bound to one solver handle."""

    def __init__(self, backend: SatBackend, alphabet: Alphabet, params: EncodingParams):
        self.backend = backend
        self.alphabet = alphabet
        self.params = params
        self.C = params.num_states
        self.K = params.transitions_per_state(alphabet)
        self.P = params.guard_nodes
        self.states = list(range(self.C))
        self.events = list(alphabet.input_events)

        # registered distinct inputs, in insertion order
        self.inputs: List[Bits] = []
        self._input_ids: Dict[Bits, int] = {}

        # automaton structure families
        self.ose: List[OneHot] = []
        self.alg0: List[List[int]] = []
        self.alg1: List[List[int]] = []
        self.dest: List[List[OneHot]] = []
        self.tie: List[List[OneHot]] = []
        # per-input families, keyed by (q, k, u) / (q, e, u)
        self.theta: Dict[Tuple[int, int, Bits], int] = {}
        self.fires: Dict[Tuple[int, int, str, Bits], int] = {}
        self.nofire: Dict[Tuple[int, str, Bits, int], int] = {}
        self.first_fired: Dict[Tuple[int, str, Bits], OneHot] = {}
        self.delta: Dict[Tuple[int, str, Bits], OneHot] = {}
        # guard parse trees, keyed by (q, k) then position
        self.nodetype: Dict[Tuple[int, int], List[OneHot]] = {}
        self.termvar: Dict[Tuple[int, int], List[OneHot]] = {}
        self.parent: Dict[Tuple[int, int], List[OneHot]] = {}
        self.child: Dict[Tuple[int, int], List[OneHot]] = {}
        self.value: Dict[Tuple[int, int, int, Bits], int] = {}
        # tree mappings
        self.pos_map: Dict[int, OneHot] = {}  # positive node id -> state one-hot
        self.neg_map: Dict[int, OneHot] = {}  # negative node id -> state-or-none
        self._neg_edges_done: set = set()
        self._neg_ends_done: set = set()

        self._structure_done = False
        self._guards_done = False

    # -- low-level helpers -------------------------------------------------

    def clause(self, *lits: int):
        self.backend.add_clause(lits)

    def imply(self, a: int, b: int):
        self.backend.add_clause((-a, b))

    def iff(self, a: int, b: int):
        self.backend.add_clause((-a, b))
        self.backend.add_clause((a, -b))

    def iff_and(self, lhs: int, rhs: Sequence[int]):
        """lhs <-> conjunction of rhs."""
        for r in rhs:
            self.backend.add_clause((-lhs, r))
        self.backend.add_clause((lhs, *[-r for r in rhs]))

    def iff_or(self, lhs: int, rhs: Sequence[int]):
        """lhs <-> disjunction of rhs."""
        for r in rhs:
            self.backend.add_clause((lhs, -r))
        self.backend.add_clause((-lhs, *rhs))

    def new_onehot(self, values: Sequence, preferred=None) -> OneHot:
        """Fresh exactly-one family; ``preferred`` seeds solver polarity."""
        vars = []
        for v in values:
            pol = preferred is not None and id_key(v) == id_key(preferred)
            vars.append(self.backend.new_var(polarity=pol))
        self.backend.add_clause(vars)
        if self.params.amo == "pairwise":
            for i in range(len(vars)):
                for j in range(i + 1, len(vars)):
                    self.backend.add_clause((-vars[i], -vars[j]))
        else:  # sequential (order-encoded) at-most-one
            if len(vars) > 1:
                prev = None
                for i in range(len(vars) - 1):
                    s = self.backend.new_var()
                    self.backend.add_clause((-vars[i], s))
                    if prev is not None:
                        self.backend.add_clause((-prev, s))
                    self.backend.add_clause((-s, -vars[i + 1]))
                    prev = s
        return OneHot(values, vars)

    # -- input registry ----------------------------------------------------

    def input_id(self, u: Bits) -> int:
        return self._input_ids[u]

    def has_input(self, u: Bits) -> bool:
        return u in self._input_ids

    def ensure_input(self, u: Bits):
        """Register an input vector, emitting its per-input columns."""
        if u in self._input_ids:
            return
        if len(u) != self.alphabet.num_inputs:
            raise StructuralError("input vector has wrong width")
        if not self._structure_done:
            raise StructuralError("registering inputs before structure encoding")
        self._input_ids[u] = len(self.inputs)
        self.inputs.append(u)
        self._emit_input_columns(u)

    def _emit_input_columns(self, u: Bits):
        from .constraints import emit_input_columns
        emit_input_columns(self, u)

    # -- model readouts ----------------------------------------------------

    def typed_node_indicators(self) -> List[int]:
        """Literals that are true iff the guard node is typed (not none)."""
        lits = []
        for q in self.states:
            for k in range(self.K):
                for p in range(self.P):
                    lits.append(-self.nodetype[q, k][p].var(NODE_NONE))
        return lits

    def transition_indicators(self) -> List[int]:
        """Literals that are true iff the transition slot is used."""
        return [-self.dest[q][k].var(NONE_VALUE)
                for q in self.states for k in range(self.K)]

    def count_typed_nodes(self, model: Sequence[bool]) -> int:
        return sum(
            0 if model[self.nodetype[q, k][p].var(NODE_NONE)] else 1
            for q in self.states for k in range(self.K) for p in range(self.P))

    def count_transitions(self, model: Sequence[bool]) -> int:
        return sum(0 if model[self.dest[q][k].var(NONE_VALUE)] else 1
                   for q in self.states for k in range(self.K))
