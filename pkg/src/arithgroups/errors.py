class ArithGroupError(Exception):
    """Base class for errors raised by this package."""


class ProblemFormatError(ArithGroupError, ValueError):
    """A problem or result file could not be parsed or is malformed."""


class InvalidLieAlgebraError(ArithGroupError, ValueError):
    """The input does not describe the Lie algebra of a unipotent group."""


class NotNilpotentError(InvalidLieAlgebraError):
    pass


class FlagError(InvalidLieAlgebraError):
    """A chain of subspaces is not a flag for the given Lie algebra."""


class InconsistencyError(ArithGroupError, RuntimeError):
    """An internal invariant of the algorithm failed.

    Raised when something that holds for every valid input does not hold,
    which points at an input that is not the Lie algebra of a unipotent
    group acting faithfully, or at a bug.
    """
