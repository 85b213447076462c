"""Edge flips, the Farey atlas of triangulations, and canonicalization.

Ideal triangulations of the once-punctured torus are the triangles of the
Farey tessellation: an edge is a slope ``p/q`` and a triangulation is
three pairwise-adjacent slopes.  Flipping an edge replaces its slope by
the other common neighbour of the remaining two.

Edges carry positional colors.  After a flip the flipped edge keeps its
position and the other two swap, so the flip of a given color is an
involution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from . import projlin as pl
from .cells import COLORS, LocalCellDescriptor, classify_local
from .errors import DegenerateConfiguration, DomainError, NonTermination
from .holonomy import neighbor_configs
from .structure import FGParamsT11, require_locus, triple_ratio
from .trigonal import proj_from_to

__all__ = [
    "FareySlope", "FareyTriangle", "TriangulationAddress", "CellDescriptor",
    "BASE_ADDRESS", "farey_neighbor", "farey_layers", "rotate", "params_from_flags",
    "flip", "flip_address", "canonicalize",
]


# --- Farey combinatorics -------------------------------------------------

@dataclass(frozen=True, order=True)
class FareySlope:
    """A reduced slope ``p/q`` with ``q >= 0``; ``1/0`` is infinity."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or (self.q == 0 and self.p != 1) or math.gcd(self.p, self.q) != 1:
            raise DomainError(f"{self.p}/{self.q} is not a reduced slope")

    @classmethod
    def from_vector(cls, a, b):
        if a == 0 and b == 0:
            raise DomainError("zero vector has no slope")
        g = math.gcd(a, b)
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        return cls(a, b)

    @classmethod
    def parse(cls, s: str):
        p, _, q = s.strip().partition("/")
        return cls.from_vector(int(p), int(q or 1))

    def det(self, other):
        return self.p * other.q - other.p * self.q

    def __str__(self):
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class FareyTriangle:
    vertices: frozenset

    def __post_init__(self):
        vs = sorted(self.vertices)
        if len(vs) != 3:
            raise DomainError("a Farey triangle has three distinct vertices")
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(vs[i].det(vs[j])) != 1:
                    raise DomainError(f"{vs[i]} and {vs[j]} are not Farey neighbours")

    @classmethod
    def of(cls, *slopes):
        return cls(frozenset(s if isinstance(s, FareySlope) else FareySlope.parse(s) for s in slopes))

    def is_mediant_form(self):
        """Some vertex is the mediant (or its negative-sum partner) of the other two."""
        vs = list(self.vertices)
        for k in range(3):
            a, b = vs[(k + 1) % 3], vs[(k + 2) % 3]
            for sgn in (1, -1):
                if FareySlope.from_vector(a.p + sgn * b.p, a.q + sgn * b.q) == vs[k]:
                    return True
        return False

    def __str__(self):
        return "{" + ", ".join(str(s) for s in sorted(self.vertices)) + "}"


def _other_neighbor(a: FareySlope, b: FareySlope, u: FareySlope) -> FareySlope:
    plus = FareySlope.from_vector(a.p + b.p, a.q + b.q)
    minus = FareySlope.from_vector(a.p - b.p, a.q - b.q)
    if plus == u:
        return minus
    if minus == u:
        return plus
    raise DomainError(f"{u} is not adjacent to both {a} and {b}")


def farey_neighbor(t: FareyTriangle, across) -> FareyTriangle:
    """The Farey triangle sharing the edge ``across`` with ``t``."""
    a, b = (s if isinstance(s, FareySlope) else FareySlope.parse(s) for s in across)
    if a == b or a not in t.vertices or b not in t.vertices:
        raise DomainError(f"({a}, {b}) is not an edge of {t}")
    (u,) = t.vertices - {a, b}
    return FareyTriangle(frozenset((a, b, _other_neighbor(a, b, u))))


def farey_layers(depth: int, base: FareyTriangle | None = None):
    """Triangles grouped by flip distance from ``base``, up to ``depth``."""
    base = base or BASE_ADDRESS.triangle
    seen = {base}
    layers = [[base]]
    for _ in range(depth):
        nxt = []
        for t in layers[-1]:
            vs = sorted(t.vertices)
            for i in range(3):
                n = farey_neighbor(t, (vs[i], vs[(i + 1) % 3]))
                if n not in seen:
                    seen.add(n)
                    nxt.append(n)
        layers.append(nxt)
    return layers


@dataclass(frozen=True)
class TriangulationAddress:
    """A Farey triangle with its slopes assigned to the three edge colors."""

    yellow: FareySlope
    cyan: FareySlope
    magenta: FareySlope

    def __post_init__(self):
        FareyTriangle(frozenset(self.slopes()))

    def slopes(self):
        return (self.yellow, self.cyan, self.magenta)

    @property
    def triangle(self):
        return FareyTriangle(frozenset(self.slopes()))

    def to_json(self):
        return {c: str(s) for c, s in zip(COLORS, self.slopes())}


BASE_ADDRESS = TriangulationAddress(FareySlope(0, 1), FareySlope(1, 1), FareySlope(1, 0))


def flip_address(addr: TriangulationAddress, color: str) -> TriangulationAddress:
    k = _color_index(color)
    s = list(addr.slopes())
    i, j = (k + 1) % 3, (k + 2) % 3
    new = _other_neighbor(s[i], s[j], s[k])
    out = [None] * 3
    out[k], out[i], out[j] = new, s[j], s[i]
    return TriangulationAddress(*out)


# --- flips of coordinates ------------------------------------------------

def _color_index(color):
    try:
        return COLORS.index(color)
    except ValueError:
        raise DomainError(f"unknown edge color {color!r}") from None


def rotate(p: FGParamsT11, k: int = 1) -> FGParamsT11:
    """Relabel the base triangle ``i -> i+1``, ``k`` times.

    The cyan edge moves into the yellow position, magenta into cyan.
    """
    for _ in range(k % 3):
        p = FGParamsT11(p.t012, p.t210, p.e12, p.e21, p.e10, p.e01, p.e20, p.e02, side=p.side)
    return p


def _line(a, b):
    return pl.cross(a, b)


def _tr(points, lines):
    try:
        return triple_ratio(pl.from_rows(*lines), pl.from_columns(*points))
    except ZeroDivisionError:
        raise DegenerateConfiguration("a pairing in the denominator vanishes") from None


def params_from_flags(W, w, X, x, side=0, field=None) -> FGParamsT11:
    """Read the eight parameters off a developed quadrilateral picture.

    ``W``/``w`` are the base triangle's vertices and tangent lines;
    ``X``/``x`` the apexes (and their tangents) across the edges
    ``W0W1``, ``W1W2``, ``W2W0``.  Edge parameters are triple ratios of
    triangles spanned by an edge endpoint, its tangent, and lines through
    the other endpoint.
    """
    W0, W1, W2 = W
    w0, w1, w2 = w
    X01, X12, X20 = X
    x01, _, _ = x
    cubes = (
        _tr((W0, W1, W2), (w0, w1, w2)),
        _tr((X01, W1, W0), (x01, w1, w0)),
        _tr((W0, X01, W2), (w0, _line(X01, W1), _line(W2, W1))),
        _tr((W1, W2, X01), (w1, _line(W2, W0), _line(X01, W0))),
        _tr((W0, W1, X20), (w0, _line(W1, W2), _line(X20, W2))),
        _tr((W2, X20, W1), (w2, _line(X20, W0), _line(W1, W0))),
        _tr((W1, X12, W0), (w1, _line(X12, W2), _line(W0, W2))),
        _tr((W2, W0, X12), (w2, _line(W0, W1), _line(X12, W1))),
    )
    field = field or pl.field_of(cubes)
    if field.exact:
        roots = [pl.rational_cbrt(c) for c in cubes]
        if any(r is None for r in roots):
            field = pl.validated()
            roots = [field.cbrt(c) for c in cubes]
    else:
        roots = [field.cbrt(c) for c in cubes]
    return FGParamsT11(*roots, side=side)


def _flip_yellow(p: FGParamsT11, field) -> FGParamsT11:
    nc = neighbor_configs(p, field)
    V0, V1, V2 = nc.base.V
    v0, v1, v2 = nc.base.v
    U0, U1, U2 = nc.U
    u0, u1, u2 = nc.u
    r = proj_from_to(nc.M, nc.Y, field)
    g = proj_from_to(nc.Y, nc.C, field)
    # Every lift of the yellow edge flips, so the far apexes come from the
    # flipped quadrilaterals r^-1(Q) and g^-1(Q) (side 0) or r(Q), g(Q).
    if p.side == 0:
        ri, gi = pl.inverse(r, field), pl.inverse(g, field)
        W, w = (U2, V2, V0), (u2, v2, v0)
        X = (V1, pl.mat_vec(ri, V2), pl.mat_vec(gi, U2))
        x = (v1, pl.covec_mat(v2, r), pl.covec_mat(u2, g))
    else:
        ri, gi = pl.inverse(r, field), pl.inverse(g, field)
        W, w = (V2, U2, V1), (v2, u2, v1)
        X = (V0, pl.mat_vec(r, U2), pl.mat_vec(g, V2))
        x = (v0, pl.covec_mat(u2, ri), pl.covec_mat(v2, gi))
    return params_from_flags(W, w, X, x, side=1 - p.side, field=field)


def flip(p: FGParamsT11, edge: str, field=None) -> FGParamsT11:
    """Coordinates of the same structure marked by the triangulation flipped at ``edge``.

    Flipping the same color twice returns the original tuple.
    """
    field = field or p.field
    require_locus(p, field)
    k = _color_index(edge)
    q = _flip_yellow(rotate(p, k), field)
    return rotate(q, -k)


# --- canonicalization ----------------------------------------------------

@dataclass(frozen=True)
class CellDescriptor:
    address: TriangulationAddress
    flat_edges: tuple
    trace: tuple = ()
    params: FGParamsT11 | None = None
    local: LocalCellDescriptor | None = None
    warnings: tuple = dc_field(default=())

    def to_json(self):
        return {
            "address": self.address.to_json(),
            "triangle": [str(s) for s in sorted(self.address.slopes())],
            "flat_edges": list(self.flat_edges),
            "flips": list(self.trace),
            "warnings": list(self.warnings),
        }


def canonicalize(p: FGParamsT11, max_flips: int = 64, field=None,
                 address: TriangulationAddress = BASE_ADDRESS, order=None) -> CellDescriptor:
    """Flip edges with bending below one until every bending is at least one.

    Ties go to the first violated color in ``order`` (yellow, cyan,
    magenta by default).  Exceeding ``max_flips`` raises
    :class:`NonTermination` carrying the trace so far.
    """
    if max_flips < 0:
        raise DomainError("max_flips must be non-negative")
    order = tuple(order or COLORS)
    field = field or p.field
    trace = []
    while True:
        local = classify_local(p, field)
        bad = [c for c in order if c in local.violated_edges]
        if not bad:
            return CellDescriptor(address, local.flat_edges, tuple(trace), p, local, local.warnings)
        if len(trace) >= max_flips:
            raise NonTermination(f"no consistent cell within {max_flips} flips", trace)
        color = bad[0]
        p = flip(p, color, field)
        field = p.field if field.exact and not p.field.exact else field
        address = flip_address(address, color)
        trace.append(color)
