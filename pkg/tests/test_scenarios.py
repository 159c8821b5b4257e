"""Prefix trees for positive and negative scenarios."""

import pytest

from eccsynth.errors import OutputConflictError, StructuralError
from eccsynth.scenarios import NegativeTree, build_positive_tree

from conftest import el


class TestPositiveTree:
    def test_single_scenario_linear(self, eq1_alphabet, eq1_scenarios):
        tree = build_positive_tree(eq1_alphabet, [eq1_scenarios[0]])
        assert len(tree) == len(eq1_scenarios[0]) + 1

    def test_worked_example_shape(self, eq1_alphabet, eq1_scenarios):
        tree = build_positive_tree(eq1_alphabet, eq1_scenarios)
        assert len(tree) == 9
        assert len(tree.active_nodes()) == 5
        assert len(tree.passive_nodes()) == 3
        assert sorted(tree.unique_inputs) == [
            (False, False), (False, True), (True, False)]

    def test_duplicate_scenario_is_idempotent(self, eq1_alphabet, eq1_scenarios):
        s1 = eq1_scenarios[0]
        tree = build_positive_tree(eq1_alphabet, [s1, s1])
        assert len(tree) == len(build_positive_tree(eq1_alphabet, [s1]))

    def test_node_count_bound(self, eq1_alphabet, eq1_scenarios):
        tree = build_positive_tree(eq1_alphabet, eq1_scenarios)
        assert len(tree) <= 1 + sum(len(s) for s in eq1_scenarios)

    def test_unique_inputs_exact(self, eq1_alphabet, eq1_scenarios):
        tree = build_positive_tree(eq1_alphabet, eq1_scenarios)
        on_edges = {n.input_values for n in tree.nodes if not n.is_root}
        assert set(tree.unique_inputs) == on_edges

    def test_output_conflict(self, eq1_alphabet):
        a = (el("R", "00", ".", "0"), el("R", "01", "B", "1"))
        b = (el("R", "00", ".", "0"), el("R", "01", "A", "0"))
        with pytest.raises(OutputConflictError):
            build_positive_tree(eq1_alphabet, [a, b])

    def test_passive_must_keep_values(self, eq1_alphabet):
        bad = (el("R", "00", ".", "1"),)  # silent step changing output values
        with pytest.raises(StructuralError):
            build_positive_tree(eq1_alphabet, [bad])

    def test_replay_check(self, eq1_alphabet, eq1_scenarios):
        tree = build_positive_tree(eq1_alphabet, eq1_scenarios)
        assert tree.replay_check(eq1_scenarios)
        tree1 = build_positive_tree(eq1_alphabet, [eq1_scenarios[0]])
        assert not tree1.replay_check([eq1_scenarios[1]])

    def test_empty_input_rejected(self, eq1_alphabet):
        with pytest.raises(StructuralError):
            build_positive_tree(eq1_alphabet, [])


class TestNegativeTree:
    def hat_alphabet(self):
        from eccsynth.automaton import Alphabet
        return Alphabet(("R",), ("A", "B"), ("x1",), ("z1",))

    def looping_example(self):
        # four elements, loop starting at the first
        e = el("R", "1", "A", "0")
        mid = el("R", "0", "A", "0")
        return (e, e, mid, e), 1

    def test_looping_scenario_back_edge(self):
        tree = NegativeTree(self.hat_alphabet())
        elements, loop = self.looping_example()
        new = tree.add_scenario(elements, loop)
        assert len(new) == 4
        # nodes are root=0 then 1..4; the last loops back to the first element
        assert tree.loop_backs == {4: {1}}
        assert tree.back_edges() == [(4, 1)]

    def test_loopless_scenario_end(self):
        tree = NegativeTree(self.hat_alphabet())
        e = el("R", "1", "A", "0")
        new = tree.add_scenario((e, e, e), None)
        assert len(tree) == 4
        assert tree.loopless_ends == {3}
        assert new == [1, 2, 3]

    def test_re_adding_returns_empty(self):
        tree = NegativeTree(self.hat_alphabet())
        elements, loop = self.looping_example()
        tree.add_scenario(elements, loop)
        assert tree.add_scenario(elements, loop) == []

    def test_monotone_growth(self):
        tree = NegativeTree(self.hat_alphabet())
        elements, loop = self.looping_example()
        tree.add_scenario(elements, loop)
        ids = [n.id for n in tree.nodes]
        edges = tree.back_edges()
        tree.add_scenario((el("R", "0", "A", "0"),), None)
        assert [n.id for n in tree.nodes[:len(ids)]] == ids
        assert [e for e in tree.back_edges() if e in edges] == edges

    def test_prefix_sharing_with_different_suffix(self):
        tree = NegativeTree(self.hat_alphabet())
        e1 = el("R", "1", "A", "0")
        tree.add_scenario((e1, e1), None)
        new = tree.add_scenario((e1, el("R", "0", "A", "0")), None)
        assert len(new) == 1  # only the diverging element is new

    def test_conflicting_negative_outputs(self):
        tree = NegativeTree(self.hat_alphabet())
        tree.add_scenario((el("R", "1", "A", "0"),), None)
        with pytest.raises(OutputConflictError):
            tree.add_scenario((el("R", "1", "B", "0"),), None)

    def test_bad_loop_index(self):
        tree = NegativeTree(self.hat_alphabet())
        with pytest.raises(StructuralError):
            tree.add_scenario((el("R", "1", "A", "0"),), loop_start=2)
