"""Developing configuration, its three neighbours, and the holonomy generators.

The base triangle has vertices the standard basis and lines ``v_i``
determined by the face parameter ``t012``.  Across each edge sits a
neighbouring triangle whose new vertex ``U_i`` and line ``u_i`` are given
by closed forms in the parameters.  The generators ``r``, ``g``, ``b`` map
the neighbours to each other in cyclic order and satisfy ``b.g.r = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import projlin as pl
from .errors import NotACube
from .projlin import Cmp
from .structure import FGParamsT11, FGParamsS03
from .trigonal import FlagTriple, proj_from_to

__all__ = [
    "DevConfig", "NeighborConfigs", "HolonomySet", "PeripheralReport",
    "dev_config", "neighbor_configs", "generators", "peripheral_eigenvalues",
    "is_parabolic_peripheral", "unimodular",
]


@dataclass(frozen=True)
class DevConfig:
    V: tuple
    v: tuple

    @property
    def flags(self) -> FlagTriple:
        return FlagTriple(pl.from_columns(*self.V), pl.from_rows(*self.v))


@dataclass(frozen=True)
class NeighborConfigs:
    base: DevConfig
    U: tuple
    u: tuple
    Y: FlagTriple
    C: FlagTriple
    M: FlagTriple


@dataclass(frozen=True)
class HolonomySet:
    """Generators scaled to determinant one, plus ``peripheral = r.g.b``."""

    r: tuple
    g: tuple
    b: tuple

    @property
    def peripheral(self):
        return pl.matmul(pl.matmul(self.r, self.g), self.b)

    def relation(self):
        """``b.g.r``, which is the identity."""
        return pl.matmul(pl.matmul(self.b, self.g), self.r)

    def normalized(self):
        return tuple(pl.normalize_max_abs(m) for m in (self.r, self.g, self.b))


@dataclass(frozen=True)
class PeripheralReport:
    parabolic: bool
    eigenvalues: tuple
    T: object
    E: object


def _t11(p):
    return p.to_t11() if isinstance(p, FGParamsS03) else p


def dev_config(p: FGParamsT11, field=None) -> DevConfig:
    field = field or p.field
    z, o, t = field.zero, field.one, p.t012
    V = ((o, z, z), (z, o, z), (z, z, o))
    v = ((z, t, o), (o, z, t), (t, o, z))
    return DevConfig(V, v)


def neighbor_configs(p, field=None) -> NeighborConfigs:
    """Vertices ``U_i`` and lines ``u_i`` of the three adjacent triangles."""
    p = _t11(p)
    field = field or p.field
    base = dev_config(p, field)
    V0, V1, V2 = base.V
    v0, v1, v2 = base.v
    t, T = p.t012, p.t210
    c01, c10 = p.e01 ** 3, p.e10 ** 3
    c12, c21 = p.e12 ** 3, p.e21 ** 3
    c20, c02 = p.e20 ** 3, p.e02 ** 3
    T3 = T ** 3

    U2 = ((c10 + 1) * t * t, (c01 + 1) * c10, -c10 * t)
    U0 = (-c21 * t, (c21 + 1) * t * t, (c12 + 1) * c21)
    U1 = ((c20 + 1) * c02, -c02 * t, (c02 + 1) * t * t)
    u2 = (c01 * c10, t * t * T3, t * (c01 * T3 + T3 + c01 * c10 + c01))
    u0 = (t * (c12 * T3 + T3 + c12 * c21 + c12), c12 * c21, t * t * T3)
    u1 = (t * t * T3, t * (c20 * T3 + T3 + c20 * c02 + c20), c20 * c02)

    Y = FlagTriple.from_flags((U2, V1, V0), (u2, v1, v0))
    C = FlagTriple.from_flags((V1, U0, V2), (v1, u0, v2))
    M = FlagTriple.from_flags((V0, V2, U1), (v0, v2, u1))
    return NeighborConfigs(base, (U0, U1, U2), (u0, u1, u2), Y, C, M)


def unimodular(m, field):
    """Rescale ``m`` by a positive factor to determinant +-1."""
    d = pl.det(m)
    return pl.scale(m, 1 / abs(field.cbrt(d)))


def generators(p, field=None) -> HolonomySet:
    """``r: M -> Y``, ``g: Y -> C``, ``b: C -> M``, each of determinant one.

    Exact mode raises :class:`NotACube` if a determinant is not a rational
    cube; callers may retry in a validated field.
    """
    p = _t11(p)
    field = field or p.field
    nc = neighbor_configs(p, field)
    r = proj_from_to(nc.M, nc.Y, field)
    g = proj_from_to(nc.Y, nc.C, field)
    b = proj_from_to(nc.C, nc.M, field)
    try:
        return HolonomySet(*(unimodular(x, field) for x in (r, g, b)))
    except NotACube:
        raise NotACube("a generator determinant is not a rational cube") from None


def peripheral_eigenvalues(p):
    """Eigenvalues of the unimodular ``r.g.b``: ``T^3, T^3/E^3, E^3/T^6``."""
    p = _t11(p)
    T, E = p.face_product(), p.edge_product()
    T3, E3 = T ** 3, E ** 3
    return (T3, T3 / E3, E3 / (T3 * T3))


def is_parabolic_peripheral(p, field=None) -> PeripheralReport:
    """Parabolicity of the peripheral element, decided on ``T`` and ``E``."""
    p = _t11(p)
    field = field or p.field
    T, E = p.face_product(), p.edge_product()
    ok = field.compare(T, 1) is Cmp.WITHIN and field.compare(E, 1) is Cmp.WITHIN
    return PeripheralReport(ok, peripheral_eigenvalues(p), T, E)
