import random
import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from projcells import projlin as pl
from projcells.structure import FGParamsT11, complete_to_locus


def rand_q(rng, lo=1, hi=9):
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi))


def rand_locus(rng, lo=1, hi=9):
    return complete_to_locus(*[rand_q(rng, lo, hi) for _ in range(6)])


def rand_off_locus(rng):
    while True:
        p = FGParamsT11(*[rand_q(rng) for _ in range(8)])
        if p.face_product() != 1 or p.edge_product() != 1:
            return p


def rand_pcd(rng):
    z = Fraction(0)
    return tuple(tuple(z if i == j else rand_q(rng, 1, 30) for j in range(3)) for i in range(3))


def rand_invertible(rng, lo=-5, hi=5):
    while True:
        m = tuple(tuple(Fraction(rng.randint(lo, hi)) for _ in range(3)) for _ in range(3))
        if pl.det(m) != 0:
            return m


positive_q = st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=30).filter(lambda x: x > 0)


@st.composite
def locus_points(draw):
    return complete_to_locus(*[draw(positive_q) for _ in range(6)])


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def ones():
    return FGParamsT11.of(*[1] * 8)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n][1])
