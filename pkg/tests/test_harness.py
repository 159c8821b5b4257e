"""Random machines, simulation, forward check and the study loop."""

import random

import pytest

from eccsynth.errors import GenerationFailedError
from eccsynth.harness import (
    RandomMachineConfig,
    StudyConfig,
    forward_check,
    random_automaton,
    run_study,
    simulate_scenarios,
)


def config(**kw):
    base = dict(num_states=3, max_transitions=6, num_input_vars=2,
                num_output_vars=2)
    base.update(kw)
    return RandomMachineConfig(**base)


class TestRandomAutomaton:
    def test_single_silent_state(self):
        machine = random_automaton(config(num_states=1, max_transitions=0),
                                   random.Random(1))
        assert machine.num_states == 1
        assert machine.transition_count() == 0

    def test_seed_determinism(self):
        a = random_automaton(config(), random.Random(17))
        b = random_automaton(config(), random.Random(17))
        assert a == b

    def test_paper_scale_shape_generates(self):
        big = RandomMachineConfig(num_states=8, max_transitions=64,
                                  num_input_vars=10, num_output_vars=7)
        machine = random_automaton(big, random.Random(3))
        assert machine.num_states == 8
        assert machine.transition_count() <= 64

    def test_all_states_reachable(self):
        rng = random.Random(9)
        for _ in range(20):
            machine = random_automaton(config(), rng)
            seen, frontier = {0}, [0]
            while frontier:
                q = frontier.pop()
                for t in machine.states[q].transitions:
                    if t.dest not in seen:
                        seen.add(t.dest)
                        frontier.append(t.dest)
            assert seen == set(range(machine.num_states))

    def test_no_duplicate_transition_within_state(self):
        import itertools
        rng = random.Random(11)
        machine = random_automaton(config(max_transitions=9), rng)
        for state in machine.states:
            keys = []
            for t in state.transitions:
                table = tuple(t.guard.eval(bits) for bits in
                              itertools.product((False, True), repeat=2))
                keys.append((t.input_event, table))
            assert len(keys) == len(set(keys))

    def test_transition_budget_validation(self):
        with pytest.raises(GenerationFailedError):
            RandomMachineConfig(num_states=2, max_transitions=5,
                                num_input_vars=1, num_output_vars=1)

    def test_all_states_carry_real_events(self):
        rng = random.Random(23)
        machine = random_automaton(config(), rng)
        assert all(s.output_event is not None for s in machine.states)


class TestSimulate:
    def test_source_satisfies_simulated(self):
        rng = random.Random(4)
        machine = random_automaton(config(), rng)
        scenarios = simulate_scenarios(machine, 10, 20, rng)
        assert machine.satisfies_all(scenarios)

    def test_shapes(self):
        rng = random.Random(5)
        machine = random_automaton(config(), rng)
        scenarios = simulate_scenarios(machine, 10, 100, rng)
        assert len(scenarios) == 10 and all(len(s) == 100 for s in scenarios)
        scenarios = simulate_scenarios(machine, 50, 50, rng)
        assert len(scenarios) == 50 and all(len(s) == 50 for s in scenarios)

    def test_seed_reproducibility(self):
        machine = random_automaton(config(), random.Random(6))
        a = simulate_scenarios(machine, 5, 10, random.Random(8))
        b = simulate_scenarios(machine, 5, 10, random.Random(8))
        assert a == b


class TestForwardCheck:
    def test_source_machine_scores_100(self):
        rng = random.Random(10)
        machine = random_automaton(config(), rng)
        validation = simulate_scenarios(machine, 20, 15, rng)
        assert forward_check(machine, validation) == 100.0

    def test_ignoring_machine_scores_0(self):
        from eccsynth.automaton import Algorithm, Automaton, State
        rng = random.Random(12)
        machine = random_automaton(config(), rng)
        validation = simulate_scenarios(machine, 10, 15, rng)
        validation = [s for s in validation
                      if any(out.event is not None for _, out in s)]
        assert validation
        silent = Automaton(machine.alphabet, (State(
            None, Algorithm.identity(2), ()),))
        assert forward_check(silent, validation) == 0.0

    def test_empty_validation_rejected(self):
        machine = random_automaton(config(), random.Random(1))
        with pytest.raises(ValueError):
            forward_check(machine, [])


class TestStudy:
    def study_config(self, **kw):
        base = dict(
            machine=config(num_input_vars=2, num_output_vars=1),
            train_count=6, train_length=10, valid_count=20, valid_length=10,
            seed=41, repetitions=3, method="extended-min", guard_nodes=3,
        )
        base.update(kw)
        return StudyConfig(**base)

    def test_single_repetition_aggregates(self):
        report = run_study(self.study_config(repetitions=1))
        assert len(report.rows) == 1
        row = report.rows[0]
        assert report.mean_seconds == row.solve_seconds
        assert report.mean_percent == row.percent
        assert report.stddev_seconds == 0.0

    def test_aggregates_recomputable(self):
        import statistics
        report = run_study(self.study_config())
        rows = report.ok_rows
        assert rows
        assert report.mean_percent == statistics.fmean(r.percent for r in rows)
        assert report.fully_validated == sum(1 for r in rows if r.percent == 100.0)

    def test_fixed_seed_byte_identical(self):
        a = run_study(self.study_config())
        b = run_study(self.study_config())
        # timings differ; compare everything else via CSV minus the time column
        def stripped(report):
            return [
                ",".join(col for i, col in enumerate(line.split(",")) if i != 3)
                for line in report.to_csv().splitlines()
            ]
        assert stripped(a) == stripped(b)
        assert a.summary().splitlines()[0] == b.summary().splitlines()[0]

    def test_methods_run(self):
        for method in ("basic-min", "extended-min-ub"):
            report = run_study(self.study_config(method=method, repetitions=2))
            assert all(r.status == "ok" for r in report.rows)

    def test_csv_includes_failures(self, monkeypatch):
        import eccsynth.harness as harness

        def broken(*args, **kw):
            raise RuntimeError("boom")

        monkeypatch.setattr(harness, "random_automaton", broken)
        report = run_study(self.study_config(repetitions=2))
        assert all(r.status.startswith("RuntimeError") for r in report.rows)
        assert "RuntimeError" in report.to_csv()
        assert report.mean_percent == 0.0
