"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class ShapeAvoidError(Exception):
    """Base class for all domain errors raised by this package."""


class ValidationError(ShapeAvoidError, ValueError):
    """Malformed input object (not a partition, permutation, tableau...)."""


class PreconditionError(ShapeAvoidError, ValueError):
    """Well-formed input that violates an operation's hypothesis."""


class BudgetExceeded(ShapeAvoidError):
    """Refused: the requested enumeration exceeds the work budget."""

    def __init__(self, what: str, work: int, budget: int):
        self.what = what
        self.work = work
        self.budget = budget
        super().__init__(f"{what}: {work} work units exceeds budget {budget}")
