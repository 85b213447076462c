"""Command-line interface.

Exit codes: 0 success, 1 input error or failed certification,
2 constraint violation, 3 indeterminate comparison, 4 budget exceeded.
``PROJCELLS_OUT`` overrides the output directory.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click

from . import projlin as pl
from .cells import log_grid, scan_disjointness, scan_to_csv
from .cloverleaf import approximate_domain, certify_containment, render_svg
from .errors import (BudgetError, ConstraintError, DomainError, Indeterminate, NonTermination,
                     ProjCellsError)
from .flips import canonicalize, flip
from .holonomy import generators, is_parabolic_peripheral
from .sphere03 import parse_decorated, s03_classify
from .structure import (FGParamsS03, fig5_sweep, format_scalar, params_to_json, parse_params,
                        validate_t11)

EXIT_INPUT, EXIT_CONSTRAINT, EXIT_INDETERMINATE, EXIT_BUDGET = 1, 2, 3, 4
FIG5_MUS = tuple(Fraction(-5, 2) + Fraction(i, 2) for i in range(8))


@dataclass(frozen=True)
class RunConfig:
    mode: str = "exact"
    precision: int = 256
    tolerance: float = 1e-30
    max_flips: int = 64
    depth: int = 6
    out_dir: str = "."

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise DomainError("mode must be 'exact' or 'float'")
        if self.max_flips <= 0 or self.depth < 0 or self.precision < 53:
            raise DomainError("budgets must be positive and precision at least 53 bits")
        if self.tolerance < 2.0 ** (-self.precision + 8):
            raise DomainError(f"tolerance {self.tolerance} is below 2^-(precision-8)")

    @property
    def field(self):
        if self.mode == "exact":
            return pl.EXACT
        return pl.validated(self.precision, self.tolerance)

    @property
    def out(self) -> Path:
        return Path(os.environ.get("PROJCELLS_OUT") or self.out_dir)


def _emit(obj):
    click.echo(json.dumps(obj, indent=2, sort_keys=False))


def _fail(code, message, extra=None):
    payload = {"error": message}
    if extra:
        payload.update(extra)
    click.echo(json.dumps(payload, indent=2), err=True)
    sys.exit(code)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except NonTermination as exc:
            _fail(EXIT_BUDGET, str(exc), {"trace": exc.trace})
        except BudgetError as exc:
            _fail(EXIT_BUDGET, str(exc))
        except ConstraintError as exc:
            _fail(EXIT_CONSTRAINT, str(exc))
        except Indeterminate as exc:
            _fail(EXIT_INDETERMINATE, str(exc))
        except ProjCellsError as exc:
            _fail(EXIT_INPUT, str(exc))
    return wrapper


def _load_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(EXIT_INPUT, f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}")


def _config(ctx_obj, **overrides):
    base = dict(ctx_obj or {})
    base.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**base)
    except (DomainError, TypeError) as exc:
        _fail(EXIT_INPUT, f"bad configuration: {exc}")


@click.group()
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
              help="JSON file with default run options.")
@click.option("--mode", type=click.Choice(["exact", "float"]), default=None)
@click.option("--precision", type=int, default=None, help="Working precision in bits (float mode).")
@click.option("--tol", "tolerance", type=float, default=None, help="Comparison tolerance (float mode).")
@click.option("--max-flips", "max_flips", type=int, default=None)
@click.option("--depth", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@click.pass_context
def main(ctx, config_file, **opts):
    """Cells, holonomy and cloverleaf renderings for cusped convex projective surfaces."""
    conf = {}
    if config_file:
        conf = _load_json(config_file)
        if not isinstance(conf, dict):
            _fail(EXIT_INPUT, "config file must hold a JSON object")
    conf.update({k: v for k, v in opts.items() if v is not None})
    ctx.obj = conf


@main.command()
@click.argument("paramfile", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@_guarded
def validate(obj, paramfile):
    """Check the finite-volume constraints T = E = 1."""
    cfg = _config(obj)
    p = parse_params(_load_json(paramfile), cfg.field)
    s = validate_t11(p, cfg.field)
    per = is_parabolic_peripheral(p, cfg.field)
    _emit({
        "kind": "S03" if isinstance(p, FGParamsS03) else "T11",
        "T": format_scalar(s.T), "E": format_scalar(s.E),
        "valid": s.valid, "within_tolerance": s.within_tolerance,
        "peripheral_eigenvalues": [format_scalar(x) for x in per.eigenvalues],
    })
    click.echo("valid" if s.valid else f"invalid: T={format_scalar(s.T)} E={format_scalar(s.E)}", err=True)
    if not s.valid:
        sys.exit(EXIT_CONSTRAINT)


@main.command()
@click.argument("paramfile", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@_guarded
def holonomy(obj, paramfile):
    """Print the generators r, g, b scaled to determinant one."""
    cfg = _config(obj)
    p = parse_params(_load_json(paramfile), cfg.field)
    h = generators(p, cfg.field)
    _emit({k: [[format_scalar(x) for x in row] for row in m]
           for k, m in zip(("r", "g", "b"), (h.r, h.g, h.b))})


@main.command()
@click.argument("paramfile", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@_guarded
def classify(obj, paramfile):
    """Canonical cell of a torus structure, or the cell of a decorated sphere."""
    cfg = _config(obj)
    data = _load_json(paramfile)
    if isinstance(data, dict) and {"w0", "w1", "w2"} <= set(data):
        d = parse_decorated(data, cfg.field)
        _emit(s03_classify(d, cfg.field).to_json())
        return
    p = parse_params(data, cfg.field)
    if isinstance(p, FGParamsS03):
        p = p.to_t11()
    validate_t11(p, cfg.field).raise_if_invalid()
    desc = canonicalize(p, cfg.max_flips, cfg.field)
    _emit(desc.to_json())


@main.command("flip")
@click.argument("paramfile", type=click.Path(exists=True, dir_okay=False))
@click.option("--edge", type=click.Choice(["yellow", "cyan", "magenta"]), required=True)
@click.pass_obj
@_guarded
def flip_cmd(obj, paramfile, edge):
    """Coordinates after flipping one edge."""
    cfg = _config(obj)
    p = parse_params(_load_json(paramfile), cfg.field)
    if isinstance(p, FGParamsS03):
        p = p.to_t11()
    _emit(params_to_json(flip(p, edge, cfg.field)))


def _render(p, cfg, name, title):
    d = approximate_domain(p, cfg.depth)
    rep = certify_containment(d)
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(render_svg(d, title=title))
    return path, rep


@main.command()
@click.argument("paramfile", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
@_guarded
def clover(obj, paramfile):
    """Render the domain in its cloverleaf patch and check containment."""
    cfg = _config(obj)
    p = parse_params(_load_json(paramfile), cfg.field)
    path, rep = _render(p, cfg, Path(paramfile).stem + ".svg", Path(paramfile).stem)
    _emit({"svg": str(path), "depth": cfg.depth, **rep.to_json()})
    if not rep.passed:
        sys.exit(EXIT_INPUT)


@main.command()
@click.pass_obj
@_guarded
def sweep(obj):
    """Render the eight-frame degenerating family mu = -2.5, -2, ..., 1."""
    cfg = _config(obj)
    field = cfg.field if not cfg.field.exact else pl.validated()
    frames, ok = [], True
    for mu in FIG5_MUS:
        tag = f"{float(mu):+.1f}"
        path, rep = _render(fig5_sweep(mu, field), cfg, f"fig5_mu{tag}.svg", f"mu = {tag}")
        ok &= rep.passed
        frames.append({"mu": str(mu), "svg": str(path), **rep.to_json()})
    _emit({"depth": cfg.depth, "frames": frames})
    if not ok:
        sys.exit(EXIT_INPUT)


@main.command()
@click.option("--n", "n", type=int, default=5, show_default=True, help="Grid points per axis.")
@click.option("--lo", default="1/4", show_default=True)
@click.option("--hi", default="4", show_default=True)
@click.option("--csv", "csv_name", default="scan.csv", show_default=True)
@click.pass_obj
@_guarded
def scan(obj, n, lo, hi, csv_name):
    """Evidence that the yellow and magenta walls avoid the cyan wall."""
    cfg = _config(obj)
    import itertools

    axis = log_grid(Fraction(lo), Fraction(hi), n)
    grid = itertools.product(axis, repeat=5)
    rep = scan_disjointness(grid, None if cfg.field.exact else cfg.field)
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    scan_to_csv(rep, out / csv_name)
    _emit({
        "samples": len(rep.rows), "cyan_flat": rep.flat_samples,
        "min_gap": None if rep.min_gap is None else format_scalar(rep.min_gap, 20),
        "argmin": None if rep.argmin is None else [format_scalar(x, 20) for x in rep.argmin],
        "indeterminate": len(rep.indeterminate), "passed": rep.passed,
        "csv": str(out / csv_name),
    })
    if rep.indeterminate:
        sys.exit(EXIT_INDETERMINATE)
    if not rep.passed:
        sys.exit(EXIT_INPUT)


if __name__ == "__main__":  # pragma: no cover
    main()
