"""Cells of the decorated moduli space of the thrice-punctured sphere.

A decorated structure is ``(t012, e01, w0, w1, w2)``.  Three convexity
conditions, one per edge, decide whether the base triangulation is
canonical (all positive) or whether one edge must be flipped to reach
one of the three neighbouring triangulations ``Delta0..Delta2``.

Since ``c[k-1] + t*c[k] = w[k]*(1 + t**3)`` (indices mod 3) is positive,
a condition that is non-positive forces its predecessor to be positive.
So at most one condition can be non-positive at a time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from . import projlin as pl
from .errors import DomainError, InternalInvariantViolation
from .projlin import Cmp

__all__ = [
    "DecoratedS03", "S03CellDescriptor", "STAR", "s03_conditions", "s03_classify",
    "cell_of_condition", "classify_batch", "parse_decorated",
]

STAR = "Delta*"


def cell_of_condition(k: int) -> int:
    """Index ``i`` of the cell ``Delta_i`` entered when condition ``k`` fails."""
    return (k - 1) % 3


@dataclass(frozen=True)
class DecoratedS03:
    t012: object
    e01: object
    w0: object
    w1: object
    w2: object

    def __post_init__(self):
        f = self.field
        for k in ("t012", "e01", "w0", "w1", "w2"):
            if f.compare(getattr(self, k)) is not Cmp.ABOVE:
                raise DomainError(f"{k} must be positive")

    @property
    def field(self):
        return pl.field_of(self.t012, self.e01, self.w0, self.w1, self.w2)

    @property
    def omega(self):
        return (self.w0, self.w1, self.w2)


@dataclass(frozen=True)
class S03CellDescriptor:
    """``cell`` is ``"Delta*"``, ``"Delta0"``..``"Delta2"`` or ``"wall"``.

    ``walls`` lists the ``i`` of each wall between ``Delta*`` and ``Delta_i``
    that the point lies on.
    """

    cell: str
    walls: tuple
    conditions: tuple

    def to_json(self):
        return {"cell": self.cell, "walls": list(self.walls)}


def s03_conditions(d: DecoratedS03):
    t = d.t012
    w0, w1, w2 = d.omega
    return (
        w1 - w2 * t + w0 * t * t,
        w2 - w0 * t + w1 * t * t,
        w0 - w1 * t + w2 * t * t,
    )


def s03_classify(d: DecoratedS03, field=None) -> S03CellDescriptor:
    field = field or d.field
    conds = s03_conditions(d)
    signs = [field.compare(c) for c in conds]
    neg = [k for k, s in enumerate(signs) if s is Cmp.BELOW]
    zero = [k for k, s in enumerate(signs) if s is Cmp.WITHIN]
    if len(neg) + len(zero) > 1:
        raise InternalInvariantViolation(f"two non-positive conditions: {conds}")
    if neg:
        return S03CellDescriptor(f"Delta{cell_of_condition(neg[0])}", (), conds)
    if zero:
        return S03CellDescriptor("wall", (cell_of_condition(zero[0]),), conds)
    return S03CellDescriptor(STAR, (), conds)


def classify_batch(t, w, use_numba=None):
    """Float classification of many points.

    Returns an int array: ``-1`` for ``Delta*``, ``i`` for ``Delta_i``.
    Points with more than one negative condition raise.
    """
    c = kernels.s03_conditions_batch(t, w, use_numba)
    neg = c < 0
    if (neg.sum(axis=1) > 1).any():
        raise InternalInvariantViolation("two negative conditions in a batch sample")
    out = np.full(c.shape[0], -1, dtype=np.int64)
    rows, cols = np.nonzero(neg)
    out[rows] = (cols - 1) % 3
    return out


def parse_decorated(obj, field=pl.EXACT) -> DecoratedS03:
    keys = ("t012", "e01", "w0", "w1", "w2")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise DomainError(f"missing keys: {', '.join(missing)}")
    vals = []
    for k in keys:
        v = obj[k]
        if field.exact and isinstance(v, float):
            v = repr(v)
        try:
            vals.append(field.convert(v))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"{k}: cannot parse {v!r}") from exc
    return DecoratedS03(*vals)
