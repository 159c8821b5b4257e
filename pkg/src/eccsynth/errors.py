"""Exception types shared across the package."""


class EccsynthError(Exception):
    """Base class for all package-specific errors."""


class StructuralError(EccsynthError):
    """A value violates a structural invariant (bad index, wrong width, ...)."""


class OutputConflictError(EccsynthError):
    """Two scenarios share an input prefix but disagree on an output action.

    Such data cannot come from a single deterministic machine, so tree
    construction refuses it instead of silently forking.
    """

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class ScenarioFormatError(EccsynthError):
    """A scenario file or scenario element is malformed."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class LtlSyntaxError(EccsynthError):
    """An LTL formula failed to parse; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DecodeMismatchError(EccsynthError):
    """A decoded machine disagrees with the SAT model it came from.

    This is an internal consistency trap: it indicates an encoder bug,
    never bad user input.
    """


class SolverFailureError(EccsynthError):
    """The SAT backend failed or timed out (UNKNOWN outcome)."""


class StateSpaceExceededError(EccsynthError):
    """Closed-loop product exploration exceeded the configured state cap."""


class PlantDeadlockError(EccsynthError):
    """The plant model has no response for a reachable (state, output) pair."""


class IterationCapExceededError(EccsynthError):
    """A CEGIS loop ran for more iterations than the configured maximum."""


class NBoundCapExceededError(EccsynthError):
    """The guard-size bound grew past its ceiling during CEGIS."""


class GenerationFailedError(EccsynthError):
    """Random automaton generation could not satisfy its constraints."""
