"""Prefix-tree storage for execution scenarios.

Positive scenarios merge into one prefix tree keyed by input actions; the
merge demands identical output actions (the data is assumed to come from one
deterministic system, so disagreement is a hard error).  Negative scenarios
live in a second tree augmented with back edges that mark prohibited loops.

Every scenario is implicitly prepended with an auxiliary element carrying the
empty output event and all-false output values; that element is the tree
root, which gives all scenarios a common prefix and fixes the initial
configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .automaton import Alphabet, Bits, InputAction, OutputAction, Scenario, bits_to_string
from .errors import OutputConflictError, StructuralError


@dataclass
class TreeNode:
    """One scenario element; the root is the auxiliary all-false element."""

    id: int
    parent: Optional[int]
    input_event: Optional[str]  # None at root only
    input_values: Optional[Bits]  # None at root only
    output_event: Optional[str]  # None is the empty event
    output_values: Bits
    children: Dict[Tuple[str, Bits], int] = field(default_factory=dict)

    @property
    def is_root(self) -> bool:
        return self.parent is None

    @property
    def is_active(self) -> bool:
        return not self.is_root and self.output_event is not None

    @property
    def is_passive(self) -> bool:
        return not self.is_root and self.output_event is None


class _ScenarioTree:
    """Shared prefix-tree mechanics for positive and negative trees."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        root = TreeNode(
            id=0,
            parent=None,
            input_event=None,
            input_values=None,
            output_event=None,
            output_values=tuple(False for _ in alphabet.output_vars),
        )
        self.nodes: List[TreeNode] = [root]
        self.unique_inputs: List[Bits] = []
        self._input_index: Dict[Bits, int] = {}

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def __len__(self) -> int:
        return len(self.nodes)

    def active_nodes(self) -> List[TreeNode]:
        return [n for n in self.nodes if n.is_active]

    def passive_nodes(self) -> List[TreeNode]:
        return [n for n in self.nodes if n.is_passive]

    def _check_element(self, action: InputAction, output: OutputAction):
        if action.event not in self.alphabet.input_events:
            raise StructuralError(f"unknown input event {action.event!r}")
        if len(action.values) != self.alphabet.num_inputs:
            raise StructuralError("input vector has wrong width")
        if output.event is not None and output.event not in self.alphabet.output_events:
            raise StructuralError(f"unknown output event {output.event!r}")
        if len(output.values) != self.alphabet.num_outputs:
            raise StructuralError("output vector has wrong width")

    def _register_input(self, values: Bits):
        if values not in self._input_index:
            self._input_index[values] = len(self.unique_inputs)
            self.unique_inputs.append(values)

    def _merge_element(self, at: TreeNode, action: InputAction, output: OutputAction,
                       path_desc: str) -> Tuple[TreeNode, bool]:
        """Follow or create the edge for one element; returns (node, created)."""
        self._check_element(action, output)
        if output.event is None and output.values != at.output_values:
            raise StructuralError(
                f"passive element changes output values at {path_desc}: "
                f"{bits_to_string(at.output_values)} -> {bits_to_string(output.values)}"
            )
        key = (action.event, action.values)
        child_id = at.children.get(key)
        if child_id is not None:
            node = self.nodes[child_id]
            if (node.output_event, node.output_values) != (output.event, output.values):
                raise OutputConflictError(
                    f"scenarios disagree after {path_desc}: "
                    f"{OutputAction(node.output_event, node.output_values)} vs {output}",
                    path=path_desc,
                )
            return node, False
        node = TreeNode(
            id=len(self.nodes),
            parent=at.id,
            input_event=action.event,
            input_values=action.values,
            output_event=output.event,
            output_values=output.values,
        )
        self.nodes.append(node)
        at.children[key] = node.id
        self._register_input(action.values)
        return node, True

    def path_to(self, node_id: int) -> List[TreeNode]:
        """Nodes from the root (inclusive) down to node_id."""
        path = []
        cur: Optional[int] = node_id
        while cur is not None:
            node = self.nodes[cur]
            path.append(node)
            cur = node.parent
        path.reverse()
        return path


class PositiveTree(_ScenarioTree):
    """Prefix tree of desired behavior, built once from all positive scenarios."""

    def __init__(self, alphabet: Alphabet, scenarios: Sequence[Scenario]):
        if not scenarios:
            raise StructuralError("no positive scenarios given")
        super().__init__(alphabet)
        self.scenarios = tuple(scenarios)
        for si, scenario in enumerate(scenarios):
            node = self.root
            for ei, (action, output) in enumerate(scenario):
                node, _ = self._merge_element(
                    at=node, action=action, output=output,
                    path_desc=f"scenario {si + 1} element {ei + 1}",
                )

    def replay_check(self, scenarios: Iterable[Scenario]) -> bool:
        """True iff every given scenario is reconstructible as a root path."""
        for scenario in scenarios:
            node = self.root
            for action, output in scenario:
                child_id = node.children.get((action.event, action.values))
                if child_id is None:
                    return False
                node = self.nodes[child_id]
                if (node.output_event, node.output_values) != (output.event, output.values):
                    return False
        return True


def build_positive_tree(alphabet: Alphabet, scenarios: Sequence[Scenario]) -> PositiveTree:
    return PositiveTree(alphabet, scenarios)


NegativeScenario = Tuple[Scenario, Optional[int]]  # elements, 1-based loop start


class NegativeTree(_ScenarioTree):
    """Prefix tree of prohibited behavior.

    Looping scenarios record a back edge from the node of their last element
    to the node of the loop-start element (configurations equal there on the
    run that produced the counterexample).  Loopless scenarios record their
    final node in ``loopless_ends``.  The tree only ever grows; node ids and
    recorded edges are stable across additions, so SAT constraints emitted
    for old nodes stay valid.
    """

    def __init__(self, alphabet: Alphabet):
        super().__init__(alphabet)
        self.loop_backs: Dict[int, Set[int]] = {}
        self.loopless_ends: Set[int] = set()

    def add_scenario(self, elements: Scenario, loop_start: Optional[int] = None) -> List[int]:
        """Merge one negative scenario; returns ids of newly created nodes.

        ``loop_start`` is the 1-based index of the element beginning the
        prohibited loop, or ``None`` for a loopless (finite) prohibition.
        Re-adding an existing scenario is a no-op and returns [].
        """
        if not elements:
            raise StructuralError("empty negative scenario")
        if loop_start is not None and not 1 <= loop_start <= len(elements):
            raise StructuralError(
                f"loop start {loop_start} outside scenario of length {len(elements)}"
            )
        new_ids: List[int] = []
        node = self.root
        path = [node]
        for ei, (action, output) in enumerate(elements):
            node, created = self._merge_element(
                at=node, action=action, output=output,
                path_desc=f"negative scenario element {ei + 1}",
            )
            path.append(node)
            if created:
                new_ids.append(node.id)
        if loop_start is None:
            self.loopless_ends.add(node.id)
        else:
            self.loop_backs.setdefault(node.id, set()).add(path[loop_start].id)
        return new_ids

    def back_edges(self) -> List[Tuple[int, int]]:
        """All (loop-end node, loop-start node) pairs, in stable order."""
        return [(end, start) for end in sorted(self.loop_backs)
                for start in sorted(self.loop_backs[end])]
