import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from projcells import kernels
from projcells import projlin as pl
from projcells.cloverleaf import (NEG_ROOTS, ROOTS_OF_UNITY, DomainApproximation,
                                  approximate_domain, certify_containment, clover_patch,
                                  render_svg, rho_symmetry)
from projcells.errors import BudgetError, ConstraintError, DomainError
from projcells.structure import FGParamsS03, FGParamsT11, fig5_sweep

from conftest import rand_locus, rand_q

F = Fraction
W = cmath.exp(2j * math.pi / 3)
CTX = pl.validated().ctx
W_MP = CTX.expjpi(CTX.mpf(2) / 3)


def test_patch_sends_vertices_to_roots(ones):
    c = clover_patch(ones)
    assert abs(c.alpha((0, 0, 1)) - 1) < 1e-60
    assert abs(c.alpha((1, 0, 0)) - W_MP) < 1e-60
    assert abs(c.alpha((0, 1, 0)) - CTX.conj(W_MP)) < 1e-60


def test_patch_vertex_images_any_locus_point(rng):
    for _ in range(10):
        c = clover_patch(rand_locus(rng))
        assert abs(c.alpha((0, 0, 5)) - 1) < 1e-60
        assert abs(c.alpha((F(1, 3), 0, 0)) - W_MP) < 1e-60


def test_patch_fig5():
    c = clover_patch(fig5_sweep(0))
    imgs = [c.alpha(e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    assert all(abs(abs(z) - 1) < 1e-60 for z in imgs)
    imgs = [complex(z) for z in imgs]
    assert abs(imgs[0] - imgs[1]) == pytest.approx(math.sqrt(3))


def test_patch_needs_locus():
    with pytest.raises(ConstraintError):
        clover_patch(FGParamsT11.of(1, 1, 2, 1, 1, 1, 1, 1))


def test_alpha_inverse_roundtrip(rng):
    c = clover_patch(rand_locus(rng))
    for z in (0.3 + 0.1j, -0.5j, 1.2):
        v = c.alpha_inverse(z)
        x, y = c.alpha_float(v[None, :])[0]
        assert abs(complex(x, y) - z) < 1e-12


def test_depth_zero_is_triangle(ones):
    d = approximate_domain(ones, 0)
    pts = [complex(x, y) for x, y in d.boundary_points]
    assert len(pts) == 3
    for z, want in zip(pts, (W, W.conjugate(), 1)):
        assert abs(z - want) < 1e-12


def test_depth_budget(ones):
    with pytest.raises(BudgetError):
        approximate_domain(ones, 11)
    with pytest.raises(BudgetError):
        approximate_domain(ones, 5, budget=4)
    with pytest.raises(DomainError):
        approximate_domain(ones, -1)


def test_all_ones_contained(ones):
    for depth in (3, 4, 6):
        rep = certify_containment(approximate_domain(ones, depth))
        assert rep.passed
        assert rep.max_margin <= 1e-12
        assert rep.interior_points == 0


def test_sphere_slice_contained(rng):
    # on this slice the support covector is a multiple of (1, 1, 1)
    for _ in range(6):
        p = FGParamsS03(rand_q(rng), rand_q(rng))
        assert len(set(clover_patch(p).omega)) == 1
        assert certify_containment(approximate_domain(p, 6)).passed


def test_symmetric_patch_contained(rng):
    for _ in range(6):
        rep = certify_containment(approximate_domain(rand_locus(rng), 6, omega=(1, 1, 1)))
        assert rep.passed


def test_monotone_in_depth(rng):
    p = rand_locus(rng)
    a = approximate_domain(p, 3).boundary_points
    b = approximate_domain(p, 4).boundary_points
    np.testing.assert_allclose(b[: len(a)], a, atol=1e-12)


def test_tangent_lines_pass_through_points(ones):
    d = approximate_domain(ones, 2)
    for pt, seg in zip(d.boundary_points, d.tangent_segments):
        if not np.isfinite(seg).all():
            continue
        a, b = seg
        cross = (b - a)[0] * (pt - a)[1] - (b - a)[1] * (pt - a)[0]
        assert abs(cross) < 1e-9


def test_roots_alone_have_zero_margin():
    rep = certify_containment(DomainApproximation.from_points(ROOTS_OF_UNITY))
    assert abs(rep.max_margin) < 1e-15
    assert rep.hull_contains_roots


def test_fake_point_fails():
    rep = certify_containment(DomainApproximation.from_points(list(ROOTS_OF_UNITY) + [2.0]))
    assert not rep.passed
    assert rep.max_margin == pytest.approx(abs(2 - NEG_ROOTS[1]) - 1)
    assert rep.max_margin == pytest.approx(0.7320508, abs=1e-6)


def test_empty_fails():
    rep = certify_containment(DomainApproximation.from_points([]))
    assert not rep.passed


def test_rho_cycles_roots(rng):
    for p in (FGParamsT11.of(*[1] * 8), rand_locus(rng), rand_locus(rng)):
        s = rho_symmetry(p).s
        imgs = [s(z) for z in ROOTS_OF_UNITY]
        perm = [min(range(3), key=lambda j: abs(w - ROOTS_OF_UNITY[j])) for w in imgs]
        assert sorted(perm) == [0, 1, 2] and perm != [0, 1, 2]
        for w, j in zip(imgs, perm):
            assert abs(w - ROOTS_OF_UNITY[j]) < 1e-9
        z = 0.2 + 0.1j
        assert abs(s(s(s(z))) - z) < 1e-9


def test_rho_is_rotation_for_symmetric_structure(ones):
    s = rho_symmetry(ones).s
    z = 0.31 - 0.2j
    w = s(z)
    assert abs(abs(w) - abs(z)) < 1e-12


def test_svg_deterministic(ones):
    d = approximate_domain(ones, 3)
    a = render_svg(d, title="ones")
    b = render_svg(approximate_domain(ones, 3), title="ones")
    assert a == b
    assert a.startswith("<?xml") and a.rstrip().endswith("</svg>")
    assert 'viewBox="-2.2 -2.2 4.4 4.4"' in a
    assert a.count('r="1"') == 3


def test_svg_empty():
    svg = render_svg(DomainApproximation.from_points([]))
    assert "<polygon" in svg and svg.count("<circle") == 3
    assert "<line" not in svg


def test_svg_tangent_switch(ones):
    d = approximate_domain(ones, 2)
    assert "<line" in render_svg(d)
    assert "<line" not in render_svg(d, draw_tangents=False)


def test_numpy_fallback_matches(ones):
    if not kernels.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    a = approximate_domain(ones, 4, use_numba=True)
    b = approximate_domain(ones, 4, use_numba=False)
    np.testing.assert_allclose(a.boundary_points, b.boundary_points, atol=1e-12)
