"""Command-line interface.

Subcommands: ``infer`` (synthesis methods), ``verify``, ``randgen``,
``simulate``, ``study``.  Exit codes: 0 success, 1 no solution / property
violated, 2 usage error, 3 backend or verifier failure.  Diagnostics go to
standard error, artifacts to files (or standard output).
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from typing import List, Optional

from . import formats
from .cegis import CegisOptions, complete_cegis, complete_star_cegis, complete_star_min_cegis
from .errors import (
    EccsynthError,
    IterationCapExceededError,
    LtlSyntaxError,
    NBoundCapExceededError,
    OutputConflictError,
    ScenarioFormatError,
    SolverFailureError,
    StateSpaceExceededError,
)
from .harness import (
    RandomMachineConfig,
    StudyConfig,
    forward_check,
    random_automaton,
    run_study,
    simulate_scenarios,
)
from .ltl import parse_ltl_file
from .sat.backend import SOLVER_ENV_VAR, DimacsProcessSolver, InProcessSolver
from .synthesis import SynthesisOptions, basic_min, extended_min, extended_min_ub
from .verifier import DEFAULT_STATE_CAP, FreePlant, Verifier

EXIT_OK = 0
EXIT_NO_SOLUTION = 1
EXIT_USAGE = 2
EXIT_BACKEND = 3

INFER_METHODS = ("basic-min", "extended-min", "extended-min-ub",
                 "complete-cegis", "complete-min-cegis")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eccsynth",
        description="SAT-based synthesis of minimal guarded Moore machines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenarios=True):
        if scenarios:
            p.add_argument("--scenarios", required=True, help="scenario file")
        p.add_argument("--solver", default=None,
                       help="'internal' or an external DIMACS solver command "
                            f"(default: ${SOLVER_ENV_VAR} or internal)")
        p.add_argument("--solver-input", choices=("file", "stdin"), default="file",
                       help="hand the CNF to the external solver via a temp "
                            "file argument or standard input")
        p.add_argument("--timeout", type=float, default=None,
                       help="per-solve wall-clock limit in seconds")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p_infer = sub.add_parser("infer", help="synthesize a machine from scenarios")
    p_infer.add_argument("method", choices=INFER_METHODS)
    common(p_infer)
    p_infer.add_argument("-C", type=int, default=None, help="state count (CEGIS)")
    p_infer.add_argument("-K", type=int, default=None,
                         help="max outgoing transitions per state")
    p_infer.add_argument("-P", type=int, default=None, help="guard parse-tree size")
    p_infer.add_argument("-N", type=int, default=None, help="total guard size bound")
    p_infer.add_argument("-w", type=str, default="2",
                         help="plateau width for the P sweep (number or 'inf')")
    p_infer.add_argument("--ltl", default=None, help="LTL property file")
    p_infer.add_argument("--plant", default=None,
                         help="plant file ('free' table keyword allowed)")
    p_infer.add_argument("--no-state-bfs", action="store_true")
    p_infer.add_argument("--no-tree-bfs", action="store_true")
    p_infer.add_argument("--amo", choices=("pairwise", "sequential"),
                         default="pairwise", help="exactly-one encoding variant")
    p_infer.add_argument("--dot", default=None, help="also render DOT here")
    p_infer.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    p_infer.add_argument("--max-iterations", type=int, default=1000)

    p_verify = sub.add_parser("verify", help="check a machine against LTL properties")
    common(p_verify, scenarios=False)
    p_verify.add_argument("--automaton", required=True)
    p_verify.add_argument("--ltl", required=True)
    p_verify.add_argument("--plant", default=None)
    p_verify.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)

    p_rand = sub.add_parser("randgen", help="generate a random machine")
    p_rand.add_argument("-C", type=int, required=True)
    p_rand.add_argument("--t-max", type=int, default=None)
    p_rand.add_argument("--invars", type=int, required=True)
    p_rand.add_argument("--outvars", type=int, required=True)
    p_rand.add_argument("--inevents", type=int, default=1)
    p_rand.add_argument("--outevents", type=int, default=1)
    p_rand.add_argument("--seed", type=int, default=0)
    p_rand.add_argument("--out", default=None)

    p_sim = sub.add_parser("simulate", help="random-walk scenarios from a machine")
    p_sim.add_argument("--automaton", required=True)
    p_sim.add_argument("--count", type=int, required=True)
    p_sim.add_argument("--length", type=int, required=True)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", default=None)

    p_study = sub.add_parser("study", help="random-automata evaluation study")
    p_study.add_argument("--c-true", type=int, required=True)
    p_study.add_argument("--t-max", type=int, default=None)
    p_study.add_argument("--invars", type=int, required=True)
    p_study.add_argument("--outvars", type=int, required=True)
    p_study.add_argument("--train", required=True, metavar="COUNTxLEN")
    p_study.add_argument("--valid", required=True, metavar="COUNTxLEN")
    p_study.add_argument("--reps", type=int, default=10)
    p_study.add_argument("--method", default="extended-min",
                         choices=("basic-min", "extended-min", "extended-min-ub"))
    p_study.add_argument("-P", type=int, default=3)
    p_study.add_argument("-w", type=str, default="2")
    p_study.add_argument("--seed", type=int, default=0)
    p_study.add_argument("--out", default=None, help="CSV file for the rows")
    return parser


def _plateau(text: str) -> Optional[int]:
    if text in ("inf", "none", "-1"):
        return None
    return int(text)


def _synthesis_options(args) -> SynthesisOptions:
    solver = args.solver or os.environ.get(SOLVER_ENV_VAR) or "internal"
    if solver == "internal":
        def factory():
            return InProcessSolver(time_limit=args.timeout)
    else:
        def factory():
            return DimacsProcessSolver(solver.split(),
                                       via_stdin=args.solver_input == "stdin",
                                       time_limit=args.timeout)
    return SynthesisOptions(
        backend_factory=factory,
        max_transitions=getattr(args, "K", None),
        state_bfs=not getattr(args, "no_state_bfs", False),
        tree_bfs=not getattr(args, "no_tree_bfs", False),
        amo=getattr(args, "amo", "pairwise"),
        on_call=lambda call: print(call.format(), file=sys.stderr),
    )


def _write(path: Optional[str], text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as handle:
            handle.write(text)


def _load_spec(args, alphabet):
    with open(args.ltl) as handle:
        formulas = parse_ltl_file(handle.read())
    if args.plant:
        with open(args.plant) as handle:
            plant = formats.parse_plant(handle.read(), alphabet)
    else:
        plant = FreePlant(alphabet)
    return formulas, plant


def _cmd_infer(args) -> int:
    with open(args.scenarios) as handle:
        alphabet, scenarios = formats.parse_scenarios(handle.read())
    options = _synthesis_options(args)
    plateau = _plateau(args.w)

    if args.method in ("complete-cegis", "complete-min-cegis"):
        if not args.ltl:
            print("error: CEGIS methods need --ltl", file=sys.stderr)
            return EXIT_USAGE
        formulas, plant = _load_spec(args, alphabet)
        cegis_options = CegisOptions(
            synthesis=options,
            max_iterations=args.max_iterations,
            state_cap=args.state_cap,
            on_iteration=lambda it: print(it.format(), file=sys.stderr),
        )
        if args.method == "complete-cegis":
            if args.C is not None and args.P is not None:
                result = complete_cegis(alphabet, scenarios, formulas, plant,
                                        args.C, args.P, args.N, cegis_options)
            else:
                result = complete_star_cegis(alphabet, scenarios, formulas, plant,
                                             plateau, cegis_options)
        else:
            result = complete_star_min_cegis(alphabet, scenarios, formulas, plant,
                                             plateau, cegis_options)
        if result is None:
            print("UNSAT: no machine complies with the specification", file=sys.stderr)
            return EXIT_NO_SOLUTION
        machine = result.automaton
        print(f"verified machine: C={result.num_states} T={result.num_transitions} "
              f"N={result.guard_nodes_total} iterations={result.num_iterations}",
              file=sys.stderr)
    else:
        if args.method == "basic-min":
            result = basic_min(alphabet, scenarios, options)
        elif args.method == "extended-min":
            if args.P is None:
                print("error: extended-min needs -P", file=sys.stderr)
                return EXIT_USAGE
            result = extended_min(alphabet, scenarios, args.P, options)
            if result is None:
                print(f"UNSAT: no machine with guards within P={args.P}",
                      file=sys.stderr)
                return EXIT_NO_SOLUTION
        else:
            result = extended_min_ub(alphabet, scenarios, plateau, options)
        machine = result.automaton
        print(f"machine: C={result.num_states} T={result.num_transitions} "
              f"N={result.guard_nodes_total} solver calls={result.solver_calls} "
              f"time={result.solve_seconds:.2f}s", file=sys.stderr)

    _write(args.out, formats.serialize_automaton(machine))
    if args.dot:
        _write(args.dot, formats.export_dot(machine))
    return EXIT_OK


def _cmd_verify(args) -> int:
    with open(args.automaton) as handle:
        machine = formats.parse_automaton(handle.read())
    formulas, plant = _load_spec(args, machine.alphabet)
    verifier = Verifier(machine, plant, args.state_cap)
    violations = verifier.verify(formulas)
    if not violations:
        print(f"ok: all {len(formulas)} properties hold", file=sys.stderr)
        return EXIT_OK
    for cex in violations:
        kind = f"looping (loop start {cex.loop_start})" if cex.is_looping else "loopless"
        print(f"violated: {cex.formula}  [{kind}]")
        for action, output in cex.trace:
            print(f"  {action} -> {output}")
    return EXIT_NO_SOLUTION


def _cmd_randgen(args) -> int:
    config = RandomMachineConfig(
        num_states=args.C,
        max_transitions=args.t_max if args.t_max is not None else args.C ** 2,
        num_input_vars=args.invars,
        num_output_vars=args.outvars,
        num_input_events=args.inevents,
        num_output_events=args.outevents,
    )
    machine = random_automaton(config, random.Random(args.seed))
    _write(args.out, formats.serialize_automaton(machine))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    with open(args.automaton) as handle:
        machine = formats.parse_automaton(handle.read())
    scenarios = simulate_scenarios(machine, args.count, args.length,
                                   random.Random(args.seed))
    _write(args.out, formats.serialize_scenarios(machine.alphabet, scenarios))
    return EXIT_OK


def _cmd_study(args) -> int:
    def shape(text):
        count, _, length = text.partition("x")
        return int(count), int(length)

    train_count, train_length = shape(args.train)
    valid_count, valid_length = shape(args.valid)
    config = StudyConfig(
        machine=RandomMachineConfig(
            num_states=args.c_true,
            max_transitions=args.t_max if args.t_max is not None else args.c_true ** 2,
            num_input_vars=args.invars,
            num_output_vars=args.outvars,
        ),
        train_count=train_count, train_length=train_length,
        valid_count=valid_count, valid_length=valid_length,
        seed=args.seed, repetitions=args.reps, method=args.method,
        guard_nodes=args.P, plateau_width=_plateau(args.w),
    )
    report = run_study(config)
    if args.out:
        _write(args.out, report.to_csv())
    print(report.summary())
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "infer":
            return _cmd_infer(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "randgen":
            return _cmd_randgen(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "study":
            return _cmd_study(args)
        return EXIT_USAGE
    except (OutputConflictError, ScenarioFormatError, LtlSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IterationCapExceededError, NBoundCapExceededError) as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except (SolverFailureError, StateSpaceExceededError) as exc:
        print(f"backend failure: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EccsynthError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
