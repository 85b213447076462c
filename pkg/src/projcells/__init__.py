"""Holonomy, canonical cells and cloverleaf renderings for cusped convex projective surfaces."""

from .errors import (BudgetError, ConstraintError, DegenerateConfiguration, DomainError,
                     Indeterminate, InternalInvariantViolation, MismatchedTrigonalParameter,
                     NonTermination, NotACube, ProjCellsError)
from .projlin import EXACT, validated
from .structure import FGParamsS03, FGParamsT11, fig5_sweep, validate_t11

__version__ = "0.1.0"

__all__ = [
    "EXACT", "validated", "FGParamsT11", "FGParamsS03", "fig5_sweep", "validate_t11",
    "ProjCellsError", "DomainError", "Indeterminate", "NotACube", "ConstraintError",
    "DegenerateConfiguration", "MismatchedTrigonalParameter", "NonTermination",
    "BudgetError", "InternalInvariantViolation",
]
