"""Cloverleaf patch, orbit approximation of the domain, and SVG rendering.

The patch is the affine plane ``omega.v = 1``.  The chart ``alpha`` sends
``V2 -> 1``, ``V0 -> exp(2 pi i/3)``, ``V1 -> exp(-2 pi i/3)``; points of
the domain boundary are approximated by orbit images of the three base
vertices under short reduced words in the generators.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import kernels
from . import projlin as pl
from .cells import support_covector
from .errors import BudgetError, DomainError
from .holonomy import dev_config, generators
from .projlin import Cmp, SIGMA
from .structure import FGParamsS03, require_locus

__all__ = [
    "ROOTS_OF_UNITY", "NEG_ROOTS", "DEFAULT_DEPTH", "MAX_DEPTH", "CloverPatch",
    "DomainApproximation", "ContainmentReport", "RhoSymmetry", "clover_patch",
    "approximate_domain", "certify_containment", "rho_symmetry", "render_svg",
]

DEFAULT_DEPTH = 6
MAX_DEPTH = 10
_Z = (cmath.exp(2j * math.pi / 3), cmath.exp(-2j * math.pi / 3), 1.0 + 0j)
ROOTS_OF_UNITY = (1.0 + 0j, _Z[0], _Z[1])
NEG_ROOTS = tuple(-z for z in ROOTS_OF_UNITY)


@dataclass(frozen=True)
class CloverPatch:
    """The chart ``alpha(v) = sum_i z_i omega_i v_i / (omega . v)``."""

    omega: tuple

    @property
    def omega_float(self):
        return np.array([float(x) for x in self.omega])

    @property
    def A(self):
        """Real 2x3 numerator matrix (real and imaginary parts)."""
        om = self.omega_float
        return np.array([[z.real * w for z, w in zip(_Z, om)], [z.imag * w for z, w in zip(_Z, om)]])

    def alpha(self, v):
        """Exact-as-possible image of a vector (complex result)."""
        field = pl.field_of(self.omega, v)
        if field.exact:
            field = pl.validated()
        ctx = field.ctx
        om = [field.convert(x) for x in self.omega]
        vv = [field.convert(x) for x in v]
        den = sum(a * b for a, b in zip(om, vv))
        if den == 0:
            raise DomainError("vector lies at infinity in the patch")
        zs = (ctx.expjpi(ctx.mpf(2) / 3), ctx.expjpi(ctx.mpf(-2) / 3), ctx.mpf(1))
        return sum(z * a * b for z, a, b in zip(zs, om, vv)) / den

    def alpha_float(self, pts):
        return kernels.project_points(self.A, self.omega_float, pts)

    def alpha_inverse(self, z):
        """A vector representative of the plane point ``z`` (complex)."""
        om = self.omega_float
        M = np.vstack([self.A, om])
        return np.linalg.solve(M, np.array([z.real, z.imag, 1.0]))


def clover_patch(p, omega=None) -> CloverPatch:
    """Cloverleaf patch of a structure on the finite-volume locus.

    ``omega`` may override the support covector, e.g. ``(1, 1, 1)``.
    """
    if isinstance(p, FGParamsS03):
        p = p.to_t11()
    require_locus(p)
    om = tuple(omega) if omega is not None else support_covector(p)
    if any(p.field.compare(x) is not Cmp.ABOVE for x in om):
        raise DomainError("support covector must be positive")
    return CloverPatch(om)


@dataclass(frozen=True)
class DomainApproximation:
    boundary_points: np.ndarray
    tangent_segments: np.ndarray = dc_field(default_factory=lambda: np.zeros((0, 2, 2)))
    depth: int = 0
    word_lengths: np.ndarray = dc_field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @classmethod
    def from_points(cls, pts):
        pts = np.asarray([[complex(z).real, complex(z).imag] for z in pts]).reshape(-1, 2)
        return cls(pts, np.zeros((0, 2, 2)), 0, np.zeros(len(pts), dtype=np.int64))


def _float_generators(p):
    h = generators(p)
    return [np.array([[float(x) for x in row] for row in m]) for m in (h.r, h.g, h.b)]


def _word_lengths(depth):
    out = [0]
    for k in range(1, depth + 1):
        out.extend([k] * (4 * 3 ** (k - 1)))
    return np.array(out, dtype=np.int64)


def approximate_domain(p, depth: int = DEFAULT_DEPTH, *, budget: int = MAX_DEPTH,
                       omega=None, half_length: float = 6.0, use_numba=None) -> DomainApproximation:
    """Orbit images of the base vertices and tangent lines under words of length <= depth."""
    if depth < 0:
        raise DomainError("depth must be non-negative")
    if depth > budget:
        raise BudgetError(f"depth {depth} exceeds the budget {budget}")
    if isinstance(p, FGParamsS03):
        p = p.to_t11()
    patch = clover_patch(p, omega)
    r, g, _ = _float_generators(p)
    mats = kernels.orbit_matrices(r, g, depth, use_numba)
    # columns of each word: images of V0, V1, V2
    verts = np.transpose(mats, (0, 2, 1)).reshape(-1, 3)
    pts = kernels.project_points(patch.A, patch.omega_float, verts, use_numba)
    lengths = np.repeat(_word_lengths(depth), 3)

    base = dev_config(p)
    lines0 = np.array([[float(x) for x in row] for row in base.v])
    # lines move by the inverse transpose; enumerating that orbit directly
    # avoids inverting long, badly conditioned words
    dual = kernels.orbit_matrices(np.linalg.inv(r).T, np.linalg.inv(g).T, depth, use_numba)
    lines = np.einsum("nab,ib->nia", dual, lines0).reshape(-1, 3)
    om = patch.omega_float
    dirs3 = np.cross(lines, om[None, :])
    dirs = dirs3 @ patch.A.T
    norms = np.linalg.norm(dirs, axis=1)
    norms[norms == 0] = 1.0
    dirs = dirs / norms[:, None]
    segs = np.stack([pts - half_length * dirs, pts + half_length * dirs], axis=1)
    segs = np.array([_clip(s) for s in segs]).reshape(-1, 2, 2)
    return DomainApproximation(pts, segs, depth, lengths)


def _clip(seg, lo=-2.2, hi=2.2):
    # Liang-Barsky against the viewport square
    (x0, y0), (x1, y1) = seg
    dx, dy = x1 - x0, y1 - y0
    t0, t1 = 0.0, 1.0
    for pv, qv in ((-dx, x0 - lo), (dx, hi - x0), (-dy, y0 - lo), (dy, hi - y0)):
        if pv == 0:
            if qv < 0:
                return np.full((2, 2), np.nan)
            continue
        t = qv / pv
        if pv < 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
    if t0 > t1:
        return np.full((2, 2), np.nan)
    return np.array([[x0 + t0 * dx, y0 + t0 * dy], [x0 + t1 * dx, y0 + t1 * dy]])


@dataclass(frozen=True)
class ContainmentReport:
    max_margin: float
    worst_point: complex | None
    tolerance: float
    hull_contains_roots: bool
    interior_points: int

    @property
    def passed(self):
        return self.max_margin <= self.tolerance and self.hull_contains_roots

    def to_json(self):
        return {
            "max_margin": self.max_margin,
            "worst_point": None if self.worst_point is None else [self.worst_point.real, self.worst_point.imag],
            "tolerance": self.tolerance,
            "hull_contains_roots": self.hull_contains_roots,
            "interior_points": self.interior_points,
            "passed": self.passed,
        }


def _hull_contains(pts, targets, tol):
    try:
        hull = ConvexHull(pts)
    except (QhullError, ValueError):
        return False
    eq = hull.equations
    return all((eq[:, :2] @ t + eq[:, 2] <= tol).all() for t in targets)


def certify_containment(d: DomainApproximation, tolerance: float = 1e-10,
                        use_numba=None) -> ContainmentReport:
    """Check the guard-disc bound and that the hull contains the roots of unity."""
    pts = np.asarray(d.boundary_points, dtype=np.float64).reshape(-1, 2)
    if len(pts) == 0:
        return ContainmentReport(-math.inf, None, tolerance, False, 0)
    margins = kernels.guard_margins(pts, use_numba)
    i = int(np.argmax(margins))
    roots = np.array([[z.real, z.imag] for z in ROOTS_OF_UNITY])
    contains = _hull_contains(pts, roots, 1e-9)
    # strictly inside the triangle on the roots of unity: distance to each
    # side (inward normal) above a small threshold
    inside = np.ones(len(pts), dtype=bool)
    for a in range(3):
        p0, p1 = roots[a], roots[(a + 1) % 3]
        nrm = np.array([-(p1 - p0)[1], (p1 - p0)[0]])
        nrm /= np.linalg.norm(nrm)
        if nrm @ (-p0) < 0:
            nrm = -nrm
        inside &= (pts - p0) @ nrm > 1e-9
    return ContainmentReport(float(margins[i]), complex(*pts[i]), tolerance, contains, int(inside.sum()))


@dataclass(frozen=True)
class RhoSymmetry:
    rho: tuple
    matrix: tuple
    patch: CloverPatch

    def s(self, z: complex) -> complex:
        """``alpha . (sigma.rho) . alpha^-1`` on plane points."""
        v = self.patch.alpha_inverse(complex(z))
        m = np.array([[float(x) for x in row] for row in self.matrix])
        w = m @ v
        out = self.patch.alpha_float(w[None, :])[0]
        return complex(out[0], out[1])


def rho_symmetry(p, omega=None) -> RhoSymmetry:
    if isinstance(p, FGParamsS03):
        p = p.to_t11()
    rho = pl.diag(
        p.e20 * p.e02 / (p.e12 * p.e10),
        p.e01 * p.e10 / (p.e20 * p.e21),
        p.e12 * p.e21 / (p.e01 * p.e02),
        field=p.field,
    )
    sig = pl.to_field(SIGMA, p.field)
    return RhoSymmetry(rho, pl.matmul(sig, rho), clover_patch(p, omega))


# --- rendering -------------------------------------------------------------

def _fmt(x):
    s = f"{x:.5f}"
    return "0.00000" if s == "-0.00000" else s


def render_svg(d: DomainApproximation, *, size: int = 440, draw_tangents: bool = True,
               tangent_depth: int = 1, point_radius: float = 0.012,
               stroke_width: float = 0.006, title: str | None = None) -> str:
    """Deterministic SVG: guard discs, base triangle, tangent lines, orbit points.

    The viewport is the square ``[-2.2, 2.2]^2`` with ``y`` pointing up.
    """
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        'viewBox="-2.2 -2.2 4.4 4.4">',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append('<g transform="scale(1,-1)">')
    out.append(f'<g fill="none" stroke="#999999" stroke-width="{_fmt(stroke_width)}">')
    for z in NEG_ROOTS:
        out.append(f'<circle cx="{_fmt(z.real)}" cy="{_fmt(z.imag)}" r="1"/>')
    out.append("</g>")
    tri = " ".join(f"{_fmt(z.real)},{_fmt(z.imag)}" for z in ROOTS_OF_UNITY)
    out.append(f'<polygon points="{tri}" fill="#f2e6a0" stroke="#000000" stroke-width="{_fmt(stroke_width)}"/>')
    if draw_tangents and len(d.tangent_segments):
        lengths = d.word_lengths if len(d.word_lengths) == len(d.tangent_segments) else None
        out.append(f'<g stroke="#3060c0" stroke-width="{_fmt(stroke_width / 2)}">')
        for k, seg in enumerate(d.tangent_segments):
            if lengths is not None and lengths[k] > tangent_depth:
                continue
            if not np.isfinite(seg).all():
                continue
            (x0, y0), (x1, y1) = seg
            out.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}"/>')
        out.append("</g>")
    out.append('<g fill="#c03030">')
    for x, y in np.asarray(d.boundary_points).reshape(-1, 2):
        if not (np.isfinite(x) and np.isfinite(y)) or abs(x) > 2.2 or abs(y) > 2.2:
            continue
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(point_radius)}"/>')
    out.append("</g>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
