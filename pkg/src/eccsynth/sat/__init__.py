from .backend import (
    SOLVER_ENV_VAR,
    DimacsProcessSolver,
    InProcessSolver,
    SatBackend,
    SolveOutcome,
)
from .cdcl import CdclSolver
from .dimacs import parse_dimacs, parse_solver_output, write_dimacs

__all__ = [
    "SOLVER_ENV_VAR",
    "CdclSolver",
    "DimacsProcessSolver",
    "InProcessSolver",
    "SatBackend",
    "SolveOutcome",
    "parse_dimacs",
    "parse_solver_output",
    "write_dimacs",
]
