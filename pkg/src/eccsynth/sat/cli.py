"""Standalone DIMACS solver entry point (``eccsynth-sat``).

Reads CNF from a file argument (or standard input when the argument is
``-`` or absent), prints an ``s``-line verdict plus ``v``-lines for the
model, and exits 10 on SAT / 20 on UNSAT.  This is what the process
backend spawns when no external solver is configured.
"""

from __future__ import annotations

import argparse
import sys

from .cdcl import CdclSolver
from .dimacs import parse_dimacs


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="eccsynth-sat",
                                     description="DIMACS CNF solver")
    parser.add_argument("cnf", nargs="?", default="-",
                        help="CNF file (default: standard input)")
    parser.add_argument("--time-limit", type=float, default=None,
                        help="wall-clock limit in seconds")
    args = parser.parse_args(argv)

    if args.cnf == "-":
        text = sys.stdin.read()
    else:
        with open(args.cnf) as handle:
            text = handle.read()
    num_vars, clauses = parse_dimacs(text)

    solver = CdclSolver()
    for _ in range(num_vars):
        solver.new_var()
    for clause in clauses:
        solver.add_clause(clause)
    status = solver.solve(time_limit=args.time_limit)

    if status == "SAT":
        print("s SATISFIABLE")
        lits = [v if solver.model_value(v) else -v for v in range(1, num_vars + 1)]
        for i in range(0, len(lits), 20):
            chunk = lits[i:i + 20]
            tail = " 0" if i + 20 >= len(lits) else ""
            print("v " + " ".join(map(str, chunk)) + tail)
        if not lits:
            print("v 0")
        return 10
    if status == "UNSAT":
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


if __name__ == "__main__":
    sys.exit(main())
