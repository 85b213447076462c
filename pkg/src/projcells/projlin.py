"""Fixed-size projective linear algebra over a switchable scalar field.

Two scalar modes are supported:

* ``EXACT``: :class:`fractions.Fraction` arithmetic, closed and exact.
* ``validated(precision, tolerance)``: :mod:`mpmath` floats at a fixed
  working precision, with three-valued comparisons against a tolerance.

Matrices are tuples of three row tuples, vectors (columns) and covectors
(rows) are plain 3-tuples.  Every function here is pure.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath

from .errors import DegenerateConfiguration, DomainError, Indeterminate, NotACube

__all__ = [
    "Cmp", "ExactField", "ValidatedField", "EXACT", "validated", "field_of",
    "CubeRoot", "integer_cbrt", "rational_cbrt",
    "mat", "from_columns", "from_rows", "column", "identity", "diag",
    "matmul", "mat_vec", "covec_mat", "pair", "transpose", "det", "adjugate",
    "inverse", "scale", "trace", "char_poly", "cross", "SIGMA", "SIGMA_INV",
    "sigma_conjugate", "is_positive_counter_diagonal", "normalize_max_abs",
    "to_field", "proj_distance", "max_abs",
]


class Cmp(enum.Enum):
    BELOW = -1
    WITHIN = 0
    ABOVE = 1


def integer_cbrt(n: int):
    """Return the integer cube root of ``n`` or ``None`` if it is not a cube."""
    if n < 0:
        r = integer_cbrt(-n)
        return None if r is None else -r
    if n < 2:
        return n
    # Newton iteration on integers, starting above the root.
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    return x if x ** 3 == n else None


def rational_cbrt(q):
    """Exact real cube root of a rational, or ``None`` when irrational."""
    q = Fraction(q)
    a = integer_cbrt(q.numerator)
    if a is None:
        return None
    b = integer_cbrt(q.denominator)
    if b is None:
        return None
    return Fraction(a, b)


@dataclass(frozen=True)
class CubeRoot:
    """The real cube root of a rational that is not itself a perfect cube.

    Equality is decided exactly by comparing radicands.
    """

    radicand: Fraction

    def cube(self) -> Fraction:
        return self.radicand

    def __float__(self):
        r = float(self.radicand)
        return math.copysign(abs(r) ** (1.0 / 3.0), r)

    def __eq__(self, other):
        if isinstance(other, CubeRoot):
            return self.radicand == other.radicand
        if isinstance(other, (int, Fraction)):
            return Fraction(other) ** 3 == self.radicand
        return NotImplemented

    def __hash__(self):
        return hash(("cbrt", self.radicand))

    def __repr__(self):
        return f"CubeRoot({self.radicand})"


class ExactField:
    """Exact rational arithmetic."""

    name = "exact"
    exact = True
    precision = None
    tolerance = Fraction(0)

    def convert(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, Rational)):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x.strip())
        if isinstance(x, float):
            return Fraction(x)
        if isinstance(x, CubeRoot):
            r = rational_cbrt(x.radicand)
            if r is None:
                raise NotACube(f"cube root of {x.radicand} is irrational")
            return r
        raise DomainError(f"cannot convert {x!r} to an exact rational")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def cbrt(self, x):
        r = rational_cbrt(x)
        if r is None:
            raise NotACube(f"{x} is not the cube of a rational")
        return r

    def compare(self, x, y=0) -> Cmp:
        d = x - y
        if d > 0:
            return Cmp.ABOVE
        if d < 0:
            return Cmp.BELOW
        return Cmp.WITHIN

    def sign(self, x) -> int:
        return (x > 0) - (x < 0)

    def abs(self, x):
        return abs(x)

    def __repr__(self):
        return "EXACT"


class ValidatedField:
    """mpmath floats at fixed precision with a comparison tolerance.

    Each instance owns a private :class:`mpmath.MPContext`, so precision
    settings never leak through mpmath's global context.
    """

    exact = False

    def __init__(self, precision: int = 256, tolerance=1e-30):
        if precision < 53:
            raise DomainError("precision must be at least 53 bits")
        self.ctx = mpmath.MPContext()
        self.ctx.prec = int(precision)
        self.precision = int(precision)
        self.tolerance = self.ctx.mpf(tolerance)
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")
        self.name = f"float{precision}"

    def convert(self, x):
        ctx = self.ctx
        if isinstance(x, Fraction) or isinstance(x, Rational):
            x = Fraction(x)
            return ctx.mpf(x.numerator) / ctx.mpf(x.denominator)
        if isinstance(x, str):
            s = x.strip()
            if "/" in s:
                return self.convert(Fraction(s))
            return ctx.mpf(s)
        if isinstance(x, CubeRoot):
            return self.cbrt(self.convert(x.radicand))
        if isinstance(x, (int, float)):
            return ctx.mpf(x)
        if hasattr(x, "_mpf_"):
            return ctx.mpf(x)
        raise DomainError(f"cannot convert {x!r} to a validated float")

    @property
    def zero(self):
        return self.ctx.mpf(0)

    @property
    def one(self):
        return self.ctx.mpf(1)

    def cbrt(self, x):
        x = self.convert(x)
        if x < 0:
            return -self.ctx.cbrt(-x)
        return self.ctx.cbrt(x)

    def compare(self, x, y=0) -> Cmp:
        d = self.convert(x) - self.convert(y)
        if abs(d) <= self.tolerance:
            return Cmp.WITHIN
        return Cmp.ABOVE if d > 0 else Cmp.BELOW

    def sign(self, x) -> int:
        c = self.compare(x)
        if c is Cmp.WITHIN:
            raise Indeterminate(f"sign of {mpmath.nstr(x, 8)} is within tolerance of 0")
        return c.value

    def abs(self, x):
        return abs(x)

    def __repr__(self):
        return f"validated(precision={self.precision}, tolerance={mpmath.nstr(self.tolerance, 3)})"


EXACT = ExactField()
_BY_CONTEXT: dict[int, ValidatedField] = {}


@functools.lru_cache(maxsize=None)
def validated(precision: int = 256, tolerance: float = 1e-30) -> ValidatedField:
    """Return the shared :class:`ValidatedField` for these settings."""
    f = ValidatedField(precision, tolerance)
    _BY_CONTEXT[id(f.ctx)] = f
    return f


def field_of(*values):
    """Infer the field that produced ``values`` (exact unless an mpf is present)."""
    for v in values:
        if isinstance(v, (tuple, list)):
            f = field_of(*v)
            if not f.exact:
                return f
        elif hasattr(v, "_mpf_"):
            ctx = getattr(v, "context", None)
            f = _BY_CONTEXT.get(id(ctx))
            return f if f is not None else validated()
    return EXACT


# --- construction ---------------------------------------------------------

def mat(rows):
    return tuple(tuple(r) for r in rows)


def from_columns(*cols):
    return tuple(tuple(c[i] for c in cols) for i in range(3))


def from_rows(*rows):
    return tuple(tuple(r) for r in rows)


def column(m, j):
    return tuple(m[i][j] for i in range(3))


def identity(field=EXACT):
    o, z = field.one, field.zero
    return ((o, z, z), (z, o, z), (z, z, o))


def diag(a, b, c, field=None):
    z = (field or field_of(a, b, c)).zero
    return ((a, z, z), (z, b, z), (z, z, c))


def to_field(obj, field):
    """Convert a scalar, vector or matrix into ``field``."""
    if isinstance(obj, (tuple, list)):
        return tuple(to_field(x, field) for x in obj)
    return field.convert(obj)


# --- arithmetic ------------------------------------------------------------

def matmul(a, b):
    return tuple(
        tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] for j in range(3))
        for i in range(3)
    )


def mat_vec(m, v):
    return tuple(m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] for i in range(3))


def covec_mat(w, m):
    return tuple(w[0] * m[0][j] + w[1] * m[1][j] + w[2] * m[2][j] for j in range(3))


def pair(w, v):
    return w[0] * v[0] + w[1] * v[1] + w[2] * v[2]


def transpose(m):
    return tuple(tuple(m[i][j] for i in range(3)) for j in range(3))


def scale(m, s):
    if isinstance(m[0], tuple):
        return tuple(tuple(x * s for x in row) for row in m)
    return tuple(x * s for x in m)


def trace(m):
    return m[0][0] + m[1][1] + m[2][2]


def det(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def adjugate(m):
    def cof(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
        return minor if (i + j) % 2 == 0 else -minor

    return tuple(tuple(cof(j, i) for j in range(3)) for i in range(3))


def inverse(m, field=None):
    """Inverse of ``m``; singular (or not certifiably regular) input raises."""
    field = field or field_of(m)
    d = det(m)
    if field.compare(d) is Cmp.WITHIN:
        raise DegenerateConfiguration("matrix is singular")
    return tuple(tuple(x / d for x in row) for row in adjugate(m))


def char_poly(m):
    """Coefficients ``(c0, c1, c2, c3)`` of the monic ``det(lambda*I - m)``.

    The polynomial is ``c0 + c1*lambda + c2*lambda**2 + c3*lambda**3`` with
    ``c3 == 1``; it equals ``-det(m - lambda*I)``.
    """
    minors = (
        m[1][1] * m[2][2] - m[1][2] * m[2][1]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[0][0] * m[1][1] - m[0][1] * m[1][0]
    )
    one = m[0][0] ** 0 if not isinstance(m[0][0], int) else 1
    return (-det(m), minors, -trace(m), one)


def cross(a, b):
    """Cross product: the covector through two points (or point on two lines)."""
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


SIGMA = ((0, 1, 0), (0, 0, 1), (1, 0, 0))
SIGMA_INV = transpose(SIGMA)


def sigma_conjugate(m):
    """``SIGMA . m . SIGMA^-1``: cyclically shifts both indices by one."""
    return tuple(tuple(m[(i + 1) % 3][(j + 1) % 3] for j in range(3)) for i in range(3))


def is_positive_counter_diagonal(m, field=None) -> bool:
    """Zero diagonal and positive off-diagonal entries.

    In validated mode the diagonal must be within tolerance of zero and
    each off-diagonal entry must be certifiably positive; an off-diagonal
    entry within tolerance of zero raises :class:`Indeterminate`.
    """
    field = field or field_of(m)
    for i in range(3):
        if field.compare(m[i][i]) is not Cmp.WITHIN:
            return False
    ok = True
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            c = field.compare(m[i][j])
            if c is Cmp.WITHIN:
                if field.exact:
                    ok = False
                else:
                    raise Indeterminate(f"entry ({i},{j}) is within tolerance of 0")
            elif c is Cmp.BELOW:
                ok = False
    return ok


def max_abs(m):
    flat = [x for row in m for x in row] if isinstance(m[0], tuple) else list(m)
    return max(abs(x) for x in flat)


def normalize_max_abs(m):
    """Rescale by a positive factor so the largest absolute entry is 1.

    The scale is always positive so cone-preserving matrices stay
    cone-preserving; the dominant entry may therefore be -1.
    """
    s = max_abs(m)
    if s == 0:
        raise DegenerateConfiguration("zero matrix or vector")
    return scale(m, 1 / s) if not isinstance(s, int) else scale(m, Fraction(1, s))


def proj_distance(a, b, *, positive=False):
    """Distance between two projective classes (vectors or matrices).

    Both representatives are scaled to unit Euclidean norm; without
    ``positive`` the sign is also quotiented out.  The computation runs in
    the validated field of the inputs, or at 256 bits for exact inputs.
    """
    field = field_of(a, b)
    if field.exact:
        field = validated()
    ctx = field.ctx
    fa = [field.convert(x) for x in _flat(a)]
    fb = [field.convert(x) for x in _flat(b)]
    na = ctx.sqrt(sum(x * x for x in fa))
    nb = ctx.sqrt(sum(x * x for x in fb))
    d_plus = ctx.sqrt(sum((x / na - y / nb) ** 2 for x, y in zip(fa, fb)))
    if positive:
        return d_plus
    d_minus = ctx.sqrt(sum((x / na + y / nb) ** 2 for x, y in zip(fa, fb)))
    return min(d_plus, d_minus)


def _flat(m):
    if isinstance(m[0], tuple):
        return [x for row in m for x in row]
    return list(m)
