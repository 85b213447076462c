"""Flag triples in standard trigonal position and projectivities between them."""

from __future__ import annotations

from dataclasses import dataclass

from . import projlin as pl
from .errors import DegenerateConfiguration, DomainError, MismatchedTrigonalParameter
from .projlin import EXACT, Cmp, CubeRoot

__all__ = [
    "FlagTriple", "std_trigonal", "trigonal_cubed", "trigonal_parameter",
    "trigonal_lambdas_cubed", "map_to_std_trigon", "proj_from_to",
]


@dataclass(frozen=True)
class FlagTriple:
    """Three flags: vertex columns ``V`` and line rows ``v``.

    ``v . V`` must be positive counter-diagonal, i.e. each line passes
    through its own vertex and sees the other two on its positive side.
    """

    V: tuple
    v: tuple

    def __post_init__(self):
        if not pl.is_positive_counter_diagonal(self.pairing(), self.field):
            raise DomainError("v.V is not positive counter-diagonal")

    @classmethod
    def from_flags(cls, points, lines):
        return cls(pl.from_columns(*points), pl.from_rows(*lines))

    @property
    def field(self):
        return pl.field_of(self.V, self.v)

    def pairing(self):
        return pl.matmul(self.v, self.V)

    def rotated(self):
        """The same flags relabelled ``i -> i+1``."""
        cols = [pl.column(self.V, j) for j in (1, 2, 0)]
        return FlagTriple(pl.from_columns(*cols), (self.v[1], self.v[2], self.v[0]))


def std_trigonal(f, field=None):
    """The standard trigonal matrix with parameter ``f``."""
    field = field or pl.field_of(f)
    z, o = field.zero, field.one
    f = field.convert(f)
    return ((z, f, o), (o, z, f), (f, o, z))


def _check_pcd(P, field):
    if not pl.is_positive_counter_diagonal(P, field):
        raise DomainError("matrix is not positive counter-diagonal")


def trigonal_cubed(P, field=None):
    """``f**3`` for a positive counter-diagonal ``P`` (no cube root taken)."""
    field = field or pl.field_of(P)
    _check_pcd(P, field)
    return (P[0][1] * P[1][2] * P[2][0]) / (P[0][2] * P[1][0] * P[2][1])


def trigonal_parameter(P, field=None):
    """Parameter ``f`` of the unique standard trigonal form ``C.P.D``.

    In exact mode the result is a :class:`~fractions.Fraction` when ``f``
    is rational and a :class:`~projcells.projlin.CubeRoot` otherwise.
    """
    field = field or pl.field_of(P)
    f3 = trigonal_cubed(P, field)
    if field.exact:
        r = pl.rational_cbrt(f3)
        return r if r is not None else CubeRoot(f3)
    return field.cbrt(f3)


def trigonal_lambdas_cubed(P):
    """Cubes of the diagonal scalings that bring ``P`` to trigonal form."""
    return (
        P[1][2] * P[2][1] / (P[1][0] * P[2][0]),
        P[2][0] * P[0][2] / (P[2][1] * P[0][1]),
        P[0][1] * P[1][0] / (P[0][2] * P[1][2]),
    )


def map_to_std_trigon(t: FlagTriple, field=None):
    """Matrix ``m`` with ``m.V`` positive diagonal and ``v.m^-1`` trigonal.

    The result is scaled to determinant one.  Exact mode needs every
    cube root to be rational and raises :class:`NotACube` otherwise.
    """
    field = field or t.field
    P = t.pairing()
    _check_pcd(P, field)
    lam = tuple(field.cbrt(x) for x in trigonal_lambdas_cubed(P))
    VD = pl.matmul(t.V, pl.diag(*lam, field=field))
    m = pl.inverse(VD, field)
    # |det|^(-1/3) keeps the scale positive; the sign of det is kept.
    return pl.scale(m, 1 / abs(field.cbrt(pl.det(m))))


def proj_from_to(src: FlagTriple, dst: FlagTriple, field=None, *, normalize=True):
    """Projectivity taking the flags of ``src`` to those of ``dst`` in order.

    Columns of ``g.V_src`` are positive multiples of ``V_dst`` and rows of
    ``v_src.g^-1`` are positive multiples of ``v_dst``.  The result is
    scaled by a positive factor so its largest absolute entry is 1.
    """
    field = field or pl.field_of(src.V, src.v, dst.V, dst.v)
    P, Q = src.pairing(), dst.pairing()
    f3s, f3d = trigonal_cubed(P, field), trigonal_cubed(Q, field)
    if field.compare(f3s, f3d) is not Cmp.WITHIN:
        raise MismatchedTrigonalParameter(f"triple ratios differ: {f3s} vs {f3d}")
    if field.exact:
        g = _direct_solve(src, dst, P, Q)
    else:
        g = pl.matmul(pl.inverse(map_to_std_trigon(dst, field), field),
                      map_to_std_trigon(src, field))
    return pl.normalize_max_abs(g) if normalize else g


def _direct_solve(src, dst, P, Q):
    # P_ij = a_i Q_ij k_j with positive diagonals a, k; then g = W.K.V^-1.
    R = [[P[i][j] / Q[i][j] if i != j else None for j in range(3)] for i in range(3)]
    k = (R[0][1] ** 0, R[2][1] / R[2][0], R[1][2] / R[1][0])
    WK = pl.matmul(dst.V, pl.diag(*k, field=EXACT))
    try:
        return pl.matmul(WK, pl.inverse(src.V, EXACT))
    except DegenerateConfiguration:
        raise DomainError("source vertices are not independent") from None
