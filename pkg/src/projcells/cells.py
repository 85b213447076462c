"""Bendings across the three edges and the local cell of a torus structure.

A point is in the closed cell of the base triangulation when the three
bendings ``YB``, ``CB``, ``MB`` (yellow, cyan, magenta edges) are all at
least one; a bending equal to one makes that edge flat.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import projlin as pl
from .errors import Indeterminate, NotACube
from .holonomy import generators
from .projlin import Cmp
from .structure import FGParamsT11, complete_to_locus, format_scalar, require_locus

__all__ = [
    "COLORS", "EdgeStatus", "Bendings", "FlatnessChart", "LocalCellDescriptor",
    "FIBER_IS_LINE", "light_cone_reps", "support_covector", "bendings",
    "flatness_chart", "solve_cb_flat_e20", "classify_local", "log_grid",
    "ScanRow", "ScanReport", "scan_disjointness", "scan_to_csv",
]

COLORS = ("yellow", "cyan", "magenta")


class EdgeStatus(enum.Enum):
    CONVEX = "convex"
    FLAT = "flat"
    VIOLATED = "violated"


class _FiberIsLine:
    """Marker: every positive ``e20`` makes the cyan edge flat."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "FIBER_IS_LINE"


FIBER_IS_LINE = _FiberIsLine()


def light_cone_reps(p: FGParamsT11):
    """Representatives ``S0, S1, S2`` of the three vertices, with ``omega.S_i = 1``."""
    z = p.field.zero
    return (
        (p.e20 * p.e02 * p.e21, z, z),
        (z, p.e01 * p.e10 * p.e02, z),
        (z, z, p.e12 * p.e21 * p.e10),
    )


def support_covector(p: FGParamsT11):
    return (p.e01 * p.e10 * p.e12, p.e12 * p.e21 * p.e20, p.e20 * p.e02 * p.e01)


@dataclass(frozen=True)
class Bendings:
    YB: object
    CB: object
    MB: object
    exact: bool

    def as_tuple(self):
        return (self.YB, self.CB, self.MB)

    def by_color(self):
        return dict(zip(COLORS, self.as_tuple()))


def _holonomy(p, field):
    if field.exact:
        try:
            return generators(p, field), field
        except NotACube:
            field = pl.validated()
            p = p.to(field)
    return generators(p, field), field


def bendings(p: FGParamsT11, field=None) -> Bendings:
    """``YB = omega.r.S0``, ``CB = omega.g.S1``, ``MB = omega.b.S2``.

    Exact arithmetic is used when the generator determinants are rational
    cubes, otherwise the computation is repeated in a validated field.
    """
    field = field or p.field
    require_locus(p, field)
    h, used = _holonomy(p, field)
    if used is not field:
        p = p.to(used)
    S0, S1, S2 = light_cone_reps(p)
    w = support_covector(p)
    return Bendings(
        pl.pair(w, pl.mat_vec(h.r, S0)),
        pl.pair(w, pl.mat_vec(h.g, S1)),
        pl.pair(w, pl.mat_vec(h.b, S2)),
        used.exact,
    )


@dataclass(frozen=True)
class FlatnessChart:
    """Polynomials governing flatness over the projection ``(t012, e01, e10, e12, e21)``."""

    top_c: object
    bot_c: object
    top_y: object
    bot_y: object
    p: object
    q: object


def flatness_chart(t012, e01, e10, e12, e21) -> FlatnessChart:
    t = t012
    top_c = e01 * e10 ** 2 * e12 ** 2 * e21 * t - e12 ** 3 - 1
    bot_c = e21 ** 3 * t + t - e01 ** 2 * e10 * e12 * e21 ** 2
    top_y = e01 * e10 ** 3 * e12 ** 2 * e21 * t + e01 * e12 ** 2 * e21 * t - e10
    bot_y = e01 * t - e01 ** 3 * e10 * e12 * e21 ** 2 - e10 * e12 * e21 ** 2
    p = (e12 ** 3 + 1) / (e01 * e10 ** 2 * e12 ** 2 * e21)
    q = e01 ** 2 * e10 * e12 * e21 ** 2 / (e21 ** 3 + 1)
    return FlatnessChart(top_c, bot_c, top_y, bot_y, p, q)


def solve_cb_flat_e20(t012, e01, e10, e12, e21, field=None):
    """The ``e20`` making the cyan edge flat over a projection point.

    Returns the unique positive solution, ``None`` when there is none, or
    :data:`FIBER_IS_LINE` when every ``e20`` works.  A sign that cannot be
    certified in a validated field raises :class:`Indeterminate`.
    """
    field = field or pl.field_of(t012, e01, e10, e12, e21)
    ch = flatness_chart(t012, e01, e10, e12, e21)
    st, sb = field.compare(ch.top_c), field.compare(ch.bot_c)
    if st is Cmp.WITHIN and sb is Cmp.WITHIN:
        return FIBER_IS_LINE
    if not field.exact and (st is Cmp.WITHIN or sb is Cmp.WITHIN):
        raise Indeterminate("exactly one of top_c, bot_c is within tolerance of 0")
    if st is not sb or st is Cmp.WITHIN:
        return None
    return e21 * ch.top_c / (e10 * e12 ** 2 * t012 * ch.bot_c)


@dataclass(frozen=True)
class LocalCellDescriptor:
    yellow: EdgeStatus
    cyan: EdgeStatus
    magenta: EdgeStatus
    bendings: Bendings
    warnings: tuple = ()

    def status(self, color):
        return getattr(self, color)

    @property
    def flat_edges(self):
        return tuple(c for c in COLORS if self.status(c) is EdgeStatus.FLAT)

    @property
    def violated_edges(self):
        return tuple(c for c in COLORS if self.status(c) is EdgeStatus.VIOLATED)

    @property
    def consistent(self):
        return not self.violated_edges


_STATUS = {Cmp.ABOVE: EdgeStatus.CONVEX, Cmp.WITHIN: EdgeStatus.FLAT, Cmp.BELOW: EdgeStatus.VIOLATED}


def classify_local(p: FGParamsT11, field=None) -> LocalCellDescriptor:
    """Convex / flat / violated status of each edge of the base triangulation."""
    field = field or p.field
    bd = bendings(p, field)
    used = field if bd.exact == field.exact else pl.validated()
    statuses, warnings = [], []
    for color, x in zip(COLORS, bd.as_tuple()):
        c = used.compare(x, 1)
        if c is Cmp.WITHIN and not used.exact and x != 1:
            warnings.append(f"{color} bending is flat only within tolerance")
        statuses.append(_STATUS[c])
    return LocalCellDescriptor(*statuses, bd, tuple(warnings))


# --- disjointness scan ---------------------------------------------------

def log_grid(lo=Fraction(1, 4), hi=Fraction(4), n=5, field=None):
    """``n`` log-uniform values on ``[lo, hi]``, exact when the ratio allows it."""
    lo, hi = Fraction(lo), Fraction(hi)
    if n == 1:
        return [lo]
    step = _rational_root(hi / lo, n - 1)
    if step is not None:
        return [lo * step ** k for k in range(n)]
    field = field or pl.validated()
    ratio = field.convert(hi / lo)
    return [field.convert(lo) * field.ctx.power(ratio, field.ctx.mpf(k) / (n - 1)) for k in range(n)]


def _rational_root(q, k):
    def iroot(m):
        r = round(m ** (1.0 / k))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** k == m:
                return c
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    return None if a is None or b is None else Fraction(a, b)


@dataclass(frozen=True)
class ScanRow:
    point: tuple
    sign_top: int
    sign_bot: int
    kind: str
    e20: object = None
    YB: object = None
    CB: object = None
    MB: object = None
    gap: object = None
    note: str = ""


@dataclass
class ScanReport:
    rows: list = dc_field(default_factory=list)
    min_gap: object = None
    argmin: tuple = None
    indeterminate: list = dc_field(default_factory=list)
    failures: list = dc_field(default_factory=list)

    @property
    def flat_samples(self):
        return sum(1 for r in self.rows if r.kind in ("flat", "fiber"))

    @property
    def passed(self):
        return not self.failures and not self.indeterminate


def _sgn(field, x):
    return field.compare(x).value


def _gap_record(report, row, point, field):
    gap = min(abs(row.YB - 1), abs(row.MB - 1))
    if report.min_gap is None or gap < report.min_gap:
        report.min_gap, report.argmin = gap, point
    if field.compare(row.YB, 1) is Cmp.WITHIN or field.compare(row.MB, 1) is Cmp.WITHIN:
        if gap == 0:
            report.failures.append(point)
        else:
            report.indeterminate.append(point)
    return gap


def scan_disjointness(grid, field=None, fiber_samples=10) -> ScanReport:
    """Check that cyan-flat points never have a flat yellow or magenta edge.

    ``grid`` yields projection points ``(t012, e01, e10, e12, e21)``.  Each
    point with a cyan-flat ``e20`` is completed to the locus and the gap
    ``min(|YB - 1|, |MB - 1|)`` is recorded.  On the middle piece the whole
    ``e20`` fiber is sampled at ``fiber_samples`` points.
    """
    report = ScanReport()
    for point in grid:
        point = tuple(point)
        f = field or pl.field_of(*point)
        point = tuple(f.convert(x) for x in point)
        ch = flatness_chart(*point)
        st, sb = _sgn(f, ch.top_c), _sgn(f, ch.bot_c)
        try:
            e20 = solve_cb_flat_e20(*point, field=f)
        except Indeterminate as exc:
            report.indeterminate.append(point)
            report.rows.append(ScanRow(point, st, sb, "indeterminate", note=str(exc)))
            continue
        if e20 is None:
            report.rows.append(ScanRow(point, st, sb, "none"))
            continue
        fibers = [e20] if e20 is not FIBER_IS_LINE else [
            f.convert(Fraction(2) ** (k - fiber_samples // 2)) for k in range(fiber_samples)
        ]
        kind = "flat" if e20 is not FIBER_IS_LINE else "fiber"
        for x in fibers:
            q = complete_to_locus(point[0], point[1], point[2], point[3], point[4], x)
            try:
                bd = bendings(q, f)
            except Indeterminate as exc:
                report.indeterminate.append(point)
                report.rows.append(ScanRow(point, st, sb, "indeterminate", x, note=str(exc)))
                continue
            row = ScanRow(point, st, sb, kind, x, bd.YB, bd.CB, bd.MB)
            bf = f if bd.exact == f.exact else pl.validated()
            gap = _gap_record(report, row, point, bf)
            report.rows.append(ScanRow(point, st, sb, kind, x, bd.YB, bd.CB, bd.MB, gap))
    return report


def scan_to_csv(report: ScanReport, out=None, digits=20) -> str:
    """Serialize a scan, one row per sample; returns the text and writes ``out`` if given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t012", "e01", "e10", "e12", "e21", "sign_top_c", "sign_bot_c", "kind",
                "e20", "YB", "CB", "MB", "gap", "note"])

    def fmt(x):
        if x is None:
            return ""
        return format_scalar(x, digits) if not isinstance(x, Fraction) else _short(x, digits)

    for r in report.rows:
        w.writerow([fmt(x) for x in r.point] + [r.sign_top, r.sign_bot, r.kind]
                   + [fmt(x) for x in (r.e20, r.YB, r.CB, r.MB, r.gap)] + [r.note])
    text = buf.getvalue()
    if out is not None:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return text


def _short(x: Fraction, digits):
    s = str(x)
    if len(s) <= 2 * digits:
        return s
    return f"{float(x):.{digits}g}" if math.isfinite(float(x)) else s
