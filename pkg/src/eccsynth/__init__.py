"""SAT-based synthesis of minimal guarded Moore machines from scenarios and LTL."""

from .automaton import (
    Algorithm,
    Alphabet,
    Automaton,
    GAnd,
    GNot,
    GOr,
    GVar,
    GuardExpr,
    InputAction,
    OutputAction,
    State,
    Transition,
    eval_guard,
)
from .cegis import (
    CegisOptions,
    CegisResult,
    complete,
    complete_cegis,
    complete_star_cegis,
    complete_star_min_cegis,
)
from .harness import (
    RandomMachineConfig,
    StudyConfig,
    StudyReport,
    forward_check,
    random_automaton,
    run_study,
    simulate_scenarios,
)
from .ltl import parse_ltl, parse_ltl_file
from .scenarios import NegativeTree, PositiveTree, build_positive_tree
from .synthesis import (
    SynthesisOptions,
    SynthesisResult,
    basic_min,
    basic_min_star,
    extended,
    extended_min,
    extended_min_ub,
)
from .verifier import Counterexample, FreePlant, TablePlant, Verifier, verify

__version__ = "0.1.0"

__all__ = [
    "Algorithm", "Alphabet", "Automaton", "CegisOptions", "CegisResult",
    "Counterexample", "FreePlant", "GAnd", "GNot", "GOr", "GVar", "GuardExpr",
    "InputAction", "NegativeTree", "OutputAction", "PositiveTree",
    "RandomMachineConfig", "State", "StudyConfig", "StudyReport",
    "SynthesisOptions", "SynthesisResult", "TablePlant", "Transition",
    "Verifier", "basic_min", "basic_min_star", "build_positive_tree",
    "complete", "complete_cegis", "complete_star_cegis",
    "complete_star_min_cegis", "eval_guard", "extended", "extended_min",
    "extended_min_ub", "forward_check", "parse_ltl", "parse_ltl_file",
    "random_automaton", "run_study", "simulate_scenarios", "verify",
]
