"""Exception hierarchy shared by all modules."""


class ProjCellsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ProjCellsError, ValueError):
    """An input lies outside the domain of an operation."""


class Indeterminate(ProjCellsError, ArithmeticError):
    """A validated comparison landed within tolerance, so no sign can be certified."""


class NotACube(ProjCellsError, ArithmeticError):
    """Exact mode needed a rational cube root that does not exist."""


class ConstraintError(ProjCellsError, ValueError):
    """The finite-volume constraints T = 1, E = 1 do not hold."""


class DegenerateConfiguration(ProjCellsError, ArithmeticError):
    """A pairing that must be nonzero vanished."""


class MismatchedTrigonalParameter(ProjCellsError, ValueError):
    """Two flag triples are not projectively equivalent."""


class NonTermination(ProjCellsError, RuntimeError):
    """The flip budget ran out before all bendings were at least one."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class BudgetError(ProjCellsError, ValueError):
    """A requested depth or size exceeds the configured budget."""


class InternalInvariantViolation(ProjCellsError, AssertionError):
    """Something that is mathematically impossible happened: a bug signal."""
