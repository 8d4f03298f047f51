"""Exception hierarchy shared by all pairboost modules."""


class PairBoostError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PairBoostError, ValueError):
    """An argument lies outside the domain of the operation."""


class PrecisionError(PairBoostError, ValueError):
    """An input violates a numerical precondition (e.g. an off-shell momentum).

    ``violation`` carries the measured size of the violation.
    """

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class StructureError(PairBoostError):
    """A computed matrix lacks the block structure an operation relies on."""


class DegenerateScenarioError(DomainError):
    """The pair scenario collapses (e.g. the two momentum branches coincide)."""


class NumericalFailure(PairBoostError, ArithmeticError):
    """A computed quantity disagrees with its independent prediction, or a
    numerical invariant (positivity, normalization) is broken beyond tolerance."""
