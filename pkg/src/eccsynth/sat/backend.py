"""Incremental SAT backends behind one small interface.

Two implementations share the contract:

* :class:`InProcessSolver` keeps one live CDCL instance and solves
  incrementally (clauses persist, assumptions are per-call).
* :class:`DimacsProcessSolver` re-dumps the accumulated CNF to DIMACS for
  every call and runs an external solver as a child process, with
  assumptions appended as unit clauses of that dump only.  Slower, but any
  solver speaking the DIMACS conventions plugs in.

Both are single-threaded per handle; distinct handles are independent.
Minimization loops only ever tighten bounds (added unit clauses), so the
re-dumping backend returns the same verdicts as the incremental one.  The
one bound-weakening point in CEGIS goes through :meth:`reset`, which
discards everything.
"""

from __future__ import annotations

import os
import subprocess
import tempfile
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from ..errors import SolverFailureError
from .cdcl import CdclSolver
from .dimacs import parse_solver_output, write_dimacs

SOLVER_ENV_VAR = "ECCSYNTH_SOLVER"


@dataclass
class SolveOutcome:
    """Result of one solve call.

    ``status`` is "SAT", "UNSAT" or "UNKNOWN"; on SAT ``model`` is a total
    assignment indexed by variable id (entry 0 unused).
    """

    status: str
    model: Optional[List[bool]] = None
    reason: Optional[str] = None

    @property
    def is_sat(self) -> bool:
        return self.status == "SAT"

    @property
    def is_unsat(self) -> bool:
        return self.status == "UNSAT"

    def require_decided(self) -> "SolveOutcome":
        if self.status == "UNKNOWN":
            raise SolverFailureError(f"solver gave no verdict: {self.reason}")
        return self


class SatBackend:
    """Interface shared by the in-process and external-process backends."""

    def new_var(self, polarity: bool = False) -> int:
        raise NotImplementedError

    def add_clause(self, lits: Sequence[int]) -> None:
        raise NotImplementedError

    def solve_under(self, assumptions: Sequence[int] = ()) -> SolveOutcome:
        raise NotImplementedError

    def reset(self) -> None:
        raise NotImplementedError

    def set_polarity(self, var: int, polarity: bool) -> None:
        pass  # optional hint

    def snapshot(self):
        """(num_vars, original clauses) as currently stored; for CNF dumps."""
        raise NotImplementedError

    @property
    def num_vars(self) -> int:
        raise NotImplementedError


class InProcessSolver(SatBackend):
    def __init__(self, time_limit: Optional[float] = None):
        self.time_limit = time_limit
        self._solver = CdclSolver()

    @property
    def num_vars(self) -> int:
        return self._solver.num_vars

    @property
    def stats(self) -> Dict[str, int]:
        return self._solver.stats

    def new_var(self, polarity: bool = False) -> int:
        return self._solver.new_var(polarity)

    def set_polarity(self, var: int, polarity: bool) -> None:
        self._solver.set_polarity(var, polarity)

    def add_clause(self, lits: Sequence[int]) -> None:
        self._solver.add_clause(lits)

    def solve_under(self, assumptions: Sequence[int] = ()) -> SolveOutcome:
        status = self._solver.solve(assumptions, time_limit=self.time_limit)
        if status == "SAT":
            return SolveOutcome("SAT", model=self._solver.model())
        if status == "UNSAT":
            return SolveOutcome("UNSAT")
        return SolveOutcome("UNKNOWN", reason="timeout")

    def reset(self) -> None:
        self._solver = CdclSolver()

    def snapshot(self):
        clauses = [[u] for u in self._solver.stored_units] + self._solver.clauses
        return self._solver.num_vars, clauses


class DimacsProcessSolver(SatBackend):
    """Runs an external DIMACS solver per call, re-dumping the CNF each time.

    ``command`` is the executable (plus fixed arguments).  With
    ``via_stdin`` the CNF goes to the child's standard input; otherwise it
    is written to a temporary file passed as the last argument.  The
    ``ECCSYNTH_SOLVER`` environment variable supplies the default command.
    """

    def __init__(self, command: Optional[Sequence[str]] = None,
                 via_stdin: bool = False, time_limit: Optional[float] = None):
        if command is None:
            env_cmd = os.environ.get(SOLVER_ENV_VAR)
            if not env_cmd:
                raise SolverFailureError(
                    f"no external solver configured (set {SOLVER_ENV_VAR} or pass a command)"
                )
            command = env_cmd.split()
        self.command = list(command)
        self.via_stdin = via_stdin
        self.time_limit = time_limit
        self._num_vars = 0
        self._clauses: List[List[int]] = []
        self._trivially_unsat = False

    @property
    def num_vars(self) -> int:
        return self._num_vars

    def new_var(self, polarity: bool = False) -> int:
        self._num_vars += 1
        return self._num_vars

    def add_clause(self, lits: Sequence[int]) -> None:
        clause = list(lits)
        for lit in clause:
            if not 0 < abs(lit) <= self._num_vars:
                raise ValueError(f"literal {lit} references unallocated variable")
        if not clause:
            self._trivially_unsat = True
        self._clauses.append(clause)

    def solve_under(self, assumptions: Sequence[int] = ()) -> SolveOutcome:
        if self._trivially_unsat:
            return SolveOutcome("UNSAT")
        clauses = self._clauses + [[lit] for lit in assumptions]
        text = write_dimacs(self._num_vars, clauses)
        try:
            if self.via_stdin:
                proc = subprocess.run(
                    self.command, input=text, capture_output=True, text=True,
                    timeout=self.time_limit,
                )
            else:
                with tempfile.NamedTemporaryFile(
                        "w", suffix=".cnf", delete=False) as handle:
                    handle.write(text)
                    path = handle.name
                try:
                    proc = subprocess.run(
                        self.command + [path], capture_output=True, text=True,
                        timeout=self.time_limit,
                    )
                finally:
                    os.unlink(path)
        except subprocess.TimeoutExpired:
            return SolveOutcome("UNKNOWN", reason="timeout")
        except OSError as exc:
            return SolveOutcome("UNKNOWN", reason=f"failed to run solver: {exc}")

        is_sat, lits = parse_solver_output(proc.stdout, proc.returncode)
        if is_sat is None:
            return SolveOutcome(
                "UNKNOWN",
                reason=f"unrecognized solver output (exit {proc.returncode})",
            )
        if not is_sat:
            return SolveOutcome("UNSAT")
        model = [False] * (self._num_vars + 1)
        for lit in lits:
            if abs(lit) <= self._num_vars:
                model[abs(lit)] = lit > 0
        return SolveOutcome("SAT", model=model)

    def reset(self) -> None:
        self._num_vars = 0
        self._clauses = []
        self._trivially_unsat = False

    def snapshot(self):
        return self._num_vars, list(self._clauses)
