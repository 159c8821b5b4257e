"""Reading and writing DIMACS CNF, and parsing solver output.

Dialect: standard ``p cnf V C`` header; clauses are whitespace-separated
signed integers terminated by 0.  Solver output is read from ``s``-lines
(SATISFIABLE / UNSATISFIABLE) with exit codes 10/20 as a fallback, and the
model from ``v``-lines.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple


def write_dimacs(num_vars: int, clauses: Sequence[Sequence[int]],
                 comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {num_vars} {len(clauses)}")
    for clause in clauses:
        lines.append(" ".join(map(str, clause)) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Tuple[int, List[List[int]]]:
    num_vars = 0
    clauses: List[List[int]] = []
    current: List[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    for clause in clauses:
        for lit in clause:
            num_vars = max(num_vars, abs(lit))
    return num_vars, clauses


def parse_solver_output(stdout: str, returncode: Optional[int] = None
                        ) -> Tuple[Optional[bool], List[int]]:
    """Returns (is_sat or None if undetermined, model literals)."""
    is_sat: Optional[bool] = None
    model: List[int] = []
    for raw in stdout.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            verdict = line[2:].strip().upper()
            if verdict == "SATISFIABLE":
                is_sat = True
            elif verdict == "UNSATISFIABLE":
                is_sat = False
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                lit = int(tok)
                if lit != 0:
                    model.append(lit)
    if is_sat is None and returncode is not None:
        if returncode == 10:
            is_sat = True
        elif returncode == 20:
            is_sat = False
    return is_sat, model
