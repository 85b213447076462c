import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from projcells import projlin as pl
from projcells.cells import COLORS, bendings, classify_local, light_cone_reps, support_covector
from projcells.errors import DomainError, NonTermination
from projcells.flips import (BASE_ADDRESS, FareySlope, FareyTriangle, TriangulationAddress,
                             canonicalize, farey_layers, farey_neighbor, flip, flip_address,
                             rotate)
from projcells.holonomy import generators, is_parabolic_peripheral
from projcells.structure import FGParamsT11, complete_to_locus, fig5_sweep, validate_t11

from conftest import rand_locus

F = Fraction
BASE = FareyTriangle.of("0/1", "1/0", "1/1")


def close(p, q, tol=1e-20):
    return p.side == q.side and all(abs(a - b) < tol for a, b in zip(p.values(), q.values()))


# --- Farey -------------------------------------------------------------------

def test_slope_normalization():
    assert FareySlope.from_vector(-2, -4) == FareySlope(1, 2)
    assert FareySlope.from_vector(-3, 0) == FareySlope(1, 0)
    assert FareySlope.parse("-1/1") == FareySlope(-1, 1)
    with pytest.raises(DomainError):
        FareySlope(2, 4)


def test_neighbor_examples():
    assert farey_neighbor(BASE, ("0/1", "1/1")) == FareyTriangle.of("0/1", "1/1", "1/2")
    assert farey_neighbor(BASE, ("1/0", "0/1")) == FareyTriangle.of("1/0", "-1/1", "0/1")
    assert farey_neighbor(BASE, ("1/0", "1/1")) == FareyTriangle.of("1/0", "1/1", "2/1")


def test_neighbor_involution():
    for edge in itertools.combinations(sorted(BASE.vertices), 2):
        assert farey_neighbor(farey_neighbor(BASE, edge), edge) == BASE


def test_neighbor_rejects_non_edge():
    with pytest.raises(DomainError):
        farey_neighbor(BASE, ("0/1", "1/2"))
    with pytest.raises(DomainError):
        FareyTriangle.of("0/1", "1/1", "2/1")


def test_layers_to_depth_eight():
    layers = farey_layers(8)
    assert [len(l) for l in layers] == [1] + [3 * 2 ** (k - 1) for k in range(1, 9)]
    seen = set()
    for layer in layers:
        for t in layer:
            assert t not in seen
            seen.add(t)
            vs = sorted(t.vertices)
            for a, b in itertools.combinations(vs, 2):
                assert abs(a.det(b)) == 1
            assert t.is_mediant_form()


def test_address_flip():
    a = flip_address(BASE_ADDRESS, "yellow")
    assert a.triangle == FareyTriangle.of("2/1", "1/1", "1/0")
    assert a.yellow == FareySlope(2, 1)
    for c in COLORS:
        assert flip_address(flip_address(BASE_ADDRESS, c), c) == BASE_ADDRESS


def test_address_regression():
    """Frozen color-to-slope bookkeeping."""
    assert BASE_ADDRESS.to_json() == {"yellow": "0/1", "cyan": "1/1", "magenta": "1/0"}
    assert flip_address(BASE_ADDRESS, "yellow").to_json() == {"yellow": "2/1", "cyan": "1/0", "magenta": "1/1"}
    assert flip_address(BASE_ADDRESS, "cyan").to_json() == {"yellow": "1/0", "cyan": "-1/1", "magenta": "0/1"}
    assert flip_address(BASE_ADDRESS, "magenta").to_json() == {"yellow": "1/1", "cyan": "0/1", "magenta": "1/2"}


# --- flips of coordinates -------------------------------------------------------

def test_rotation_regression():
    p = FGParamsT11.of(*range(1, 9))
    assert rotate(p).values() == (1, 2, 7, 8, 4, 3, 6, 5)
    assert rotate(p, 3) == p
    assert rotate(rotate(p), -1) == p


def test_flip_all_ones_stays_on_locus(ones):
    for c in COLORS:
        q = flip(ones, c)
        assert validate_t11(q).valid
        assert q.side == 1


def test_flip_involution_exact_when_possible(ones):
    for c in COLORS:
        q = flip(ones, c)
        r = flip(q, c)
        if r.field.exact:
            assert r == ones
        else:
            assert close(r, ones.to(r.field))


def test_flip_involution_random(rng):
    v = pl.validated()
    for _ in range(15):
        p = rand_locus(rng).to(v)
        for c in COLORS:
            q = flip(p, c)
            assert validate_t11(q).valid
            assert close(flip(q, c), p)


def test_flip_requires_locus():
    with pytest.raises(Exception) as exc:
        flip(FGParamsT11.of(1, 1, 2, 1, 1, 1, 1, 1), "yellow")
    assert "locus" in str(exc.value)


def test_flip_unknown_color(ones):
    with pytest.raises(DomainError):
        flip(ones, "green")


def geometric_bendings(p, side):
    """Bendings of the flipped picture read off the original developed picture."""
    v = pl.validated()
    p = p.to(v)
    h = generators(p, v)
    S0, S1, S2 = light_cone_reps(p)
    r, g = h.r, h.g
    ri, gi = pl.inverse(r, v), pl.inverse(g, v)
    rS0 = pl.mat_vec(r, S0)
    if side == 0:
        W = (rS0, S2, S0)
        X = (S1, pl.mat_vec(ri, S2), pl.mat_vec(gi, rS0))
    else:
        W = (S2, rS0, S1)
        X = (S0, pl.mat_vec(r, rS0), pl.mat_vec(g, S2))
    # support plane through the three new base vertices
    M = pl.from_rows(*W)
    om = pl.mat_vec(pl.inverse(M, v), (v.one, v.one, v.one))
    return tuple(pl.pair(om, x) for x in X)


def test_flip_matches_geometric_bendings(rng):
    v = pl.validated()
    for _ in range(8):
        p = rand_locus(rng).to(v)
        for side in (0, 1):
            p = p.with_side(side)
            q = flip(p, "yellow")
            got = bendings(q).as_tuple()
            want = geometric_bendings(p, side)
            for a, b in zip(got, want):
                assert abs(a - b) < 1e-40 * max(1, abs(b))


def test_flipped_edge_changes_side(rng):
    """Across the wall the flipped edge turns from convex to violated and back."""
    v = pl.validated()
    for _ in range(10):
        p = rand_locus(rng).to(v)
        assert (bendings(p).YB > 1) != (bendings(flip(p, "yellow")).YB > 1)


def test_fig5_flip_stays_parabolic():
    p = fig5_sweep(F(-5, 2))
    q = flip(p, "yellow")
    assert is_parabolic_peripheral(q).parabolic


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6), st.sampled_from(COLORS))
def test_flip_preserves_locus(exps, color):
    p = complete_to_locus(*[F(2) ** k for k in exps])
    assert validate_t11(flip(p, color)).valid


# --- canonicalization -------------------------------------------------------

def test_canonical_all_ones(ones):
    d = canonicalize(ones)
    assert d.address == BASE_ADDRESS and d.trace == () and d.flat_edges == ()
    assert d.to_json()["triangle"] == ["0/1", "1/0", "1/1"]


def cyan_flat_point():
    return complete_to_locus(F(3), 1, 1, 1, 1, F(1, 15))


def test_canonical_flat_point():
    d = canonicalize(cyan_flat_point())
    assert d.trace == () and d.flat_edges == ("cyan",)


def test_canonical_just_past_flat_wall():
    p = complete_to_locus(F(3), 1, 1, 1, 1, F(1, 15) * F(99, 100))
    assert classify_local(p).violated_edges == ("cyan",)
    d = canonicalize(p)
    assert d.trace == ("cyan",)
    assert d.address == flip_address(BASE_ADDRESS, "cyan")
    assert d.local.consistent


@pytest.mark.parametrize("mu", [F(-5, 2) + F(k, 2) for k in range(8)])
def test_canonical_fig5(mu):
    d = canonicalize(fig5_sweep(mu))
    assert len(d.trace) <= 64


def test_canonical_order_insensitive(rng):
    v = pl.validated()
    orders = list(itertools.permutations(COLORS))
    for _ in range(15):
        p = rand_locus(rng).to(v)
        outs = {canonicalize(p, order=o).address.triangle for o in orders}
        assert len(outs) == 1


def test_flip_then_canonicalize_readdresses(rng):
    v = pl.validated()
    for _ in range(10):
        p = rand_locus(rng).to(v)
        d = canonicalize(p)
        for c in COLORS:
            d2 = canonicalize(flip(p, c), address=flip_address(BASE_ADDRESS, c))
            assert d2.address.triangle == d.address.triangle


def test_budget_exhausted():
    p = complete_to_locus(F(3), 1, 1, 1, 1, F(1, 20))
    with pytest.raises(NonTermination) as exc:
        canonicalize(p, max_flips=0)
    assert exc.value.trace == []
    with pytest.raises(DomainError):
        canonicalize(p, max_flips=-1)
