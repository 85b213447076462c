"""Coordinate tuples for the moduli spaces and the triple ratio."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from fractions import Fraction

import mpmath

from . import projlin as pl
from .errors import ConstraintError, DegenerateConfiguration, DomainError
from .projlin import EXACT, Cmp

__all__ = [
    "T11_KEYS", "FGParamsT11", "FGParamsS03", "HolonomySummary", "validate_t11",
    "require_locus", "triple_ratio", "fig5_sweep", "parse_params", "format_scalar",
    "params_to_json", "complete_to_locus",
]

T11_KEYS = ("t012", "t210", "e01", "e10", "e02", "e20", "e12", "e21")


@dataclass(frozen=True)
class FGParamsT11:
    """Face and edge parameters of a once-punctured torus structure.

    ``side`` records which of the two triangles adjacent in the flip tree
    the marking was reached from; it only matters for :func:`flips.flip`.
    """

    t012: object
    t210: object
    e01: object
    e10: object
    e02: object
    e20: object
    e12: object
    e21: object
    side: int = 0

    def __post_init__(self):
        f = self.field
        for k in T11_KEYS:
            if f.compare(getattr(self, k)) is not Cmp.ABOVE:
                raise DomainError(f"{k} must be positive, got {getattr(self, k)}")
        if self.side not in (0, 1):
            raise DomainError("side must be 0 or 1")

    @classmethod
    def of(cls, *values, field=EXACT, side=0):
        if len(values) != 8:
            raise DomainError("expected eight parameters")
        return cls(*(field.convert(x) for x in values), side=side)

    @property
    def field(self):
        return pl.field_of(*(getattr(self, k) for k in T11_KEYS))

    def values(self):
        return tuple(getattr(self, k) for k in T11_KEYS)

    def to(self, field):
        return FGParamsT11(*(field.convert(x) for x in self.values()), side=self.side)

    def with_side(self, side):
        return replace(self, side=side)

    def face_product(self):
        return self.t012 * self.t210

    def edge_product(self):
        return self.e01 * self.e10 * self.e02 * self.e20 * self.e12 * self.e21


@dataclass(frozen=True)
class FGParamsS03:
    """Two-parameter slice describing thrice-punctured sphere structures."""

    t012: object
    e01: object

    def __post_init__(self):
        f = pl.field_of(self.t012, self.e01)
        for k in ("t012", "e01"):
            if f.compare(getattr(self, k)) is not Cmp.ABOVE:
                raise DomainError(f"{k} must be positive")

    def to_t11(self) -> FGParamsT11:
        t, e = self.t012, self.e01
        return FGParamsT11(t, 1 / t, e, 1 / e, 1 / e, e, e, 1 / e)


@dataclass(frozen=True)
class HolonomySummary:
    T: object
    E: object
    valid: bool
    within_tolerance: bool = False

    def raise_if_invalid(self):
        if not self.valid:
            raise ConstraintError(f"off the finite-volume locus: T={self.T}, E={self.E}")
        return self


def validate_t11(p, field=None) -> HolonomySummary:
    """Face product ``T`` and edge product ``E``; valid iff both equal one."""
    if isinstance(p, FGParamsS03):
        p = p.to_t11()
    field = field or p.field
    T, E = p.face_product(), p.edge_product()
    cT, cE = field.compare(T, 1), field.compare(E, 1)
    valid = cT is Cmp.WITHIN and cE is Cmp.WITHIN
    soft = valid and not field.exact and (T != 1 or E != 1)
    return HolonomySummary(T, E, valid, soft)


def require_locus(p, field=None) -> FGParamsT11:
    validate_t11(p, field).raise_if_invalid()
    return p


def triple_ratio(lines, points):
    """Triple ratio of the flags whose lines are the rows of ``lines``."""
    P = pl.matmul(lines, points)
    den = P[0][2] * P[1][0] * P[2][1]
    if den == 0:
        raise DegenerateConfiguration("a pairing in the denominator vanishes")
    return P[0][1] * P[1][2] * P[2][0] / den


def fig5_sweep(mu, field=None) -> FGParamsT11:
    """Member ``mu`` of a one-parameter family degenerating as ``mu -> -oo``."""
    field = field or pl.validated()
    if field.exact:
        raise DomainError("the sweep involves cube roots of 2; use a validated field")
    c = field.ctx
    mu = field.convert(mu)
    two = c.mpf(2)
    third = c.mpf(1) / 3
    return FGParamsT11(
        c.power(two, -third), c.power(two, third), c.mpf(1), c.power(two, 2 * third),
        c.mpf(1), c.mpf(1), c.power(two, mu), c.power(two, -mu - 2 * third),
    )


def complete_to_locus(t012, e01, e10, e12, e21, e20, side=0) -> FGParamsT11:
    """Fill in ``t210`` and ``e02`` so both product constraints hold."""
    return FGParamsT11(t012, 1 / t012, e01, e10, 1 / (e01 * e10 * e12 * e21 * e20),
                       e20, e12, e21, side=side)


def parse_params(obj, field=EXACT):
    """Parse a JSON object into :class:`FGParamsT11` or :class:`FGParamsS03`.

    Values may be JSON numbers, decimal strings or ``"p/q"`` strings.
    """
    if not isinstance(obj, dict):
        raise DomainError("parameters must be a JSON object")

    def conv(k):
        v = obj[k]
        if isinstance(v, bool) or not isinstance(v, (int, float, str)):
            raise DomainError(f"{k}: expected a number or numeric string")
        if field.exact and isinstance(v, float):
            v = repr(v)
        try:
            return field.convert(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"{k}: cannot parse {v!r}") from exc

    if all(k in obj for k in T11_KEYS):
        return FGParamsT11(*(conv(k) for k in T11_KEYS))
    if "t012" in obj and "e01" in obj and not any(k in obj for k in T11_KEYS[1:] if k != "e01"):
        return FGParamsS03(conv("t012"), conv("e01"))
    missing = [k for k in T11_KEYS if k not in obj]
    raise DomainError(f"missing parameters: {', '.join(missing)}")


def format_scalar(x, digits=40) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    ctx = getattr(x, "context", mpmath.mp)
    return ctx.nstr(x, digits)


def params_to_json(p) -> dict:
    names = [f.name for f in fields(p) if f.name != "side"]
    return {k: format_scalar(getattr(p, k)) for k in names}
