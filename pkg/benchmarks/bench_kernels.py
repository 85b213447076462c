"""Compare the numba kernels with their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints best-of-N wall times per kernel and the speedup.  With
PROJCELLS_NO_NUMBA=1 only the numpy column is meaningful.
"""

import argparse
import timeit

import numpy as np

from projcells import kernels
from projcells.cloverleaf import _float_generators
from projcells.structure import fig5_sweep


def cases():
    rng = np.random.default_rng(0)
    r, g, _ = _float_generators(fig5_sweep(0))
    n = 10 ** 6
    t = np.exp(rng.uniform(-3, 3, n))
    w = np.exp(rng.uniform(-3, 3, (n, 3)))
    mats = kernels.orbit_matrices(r, g, 8)
    pts = np.transpose(mats, (0, 2, 1)).reshape(-1, 3)
    A = rng.normal(size=(2, 3))
    om = np.abs(rng.normal(size=3)) + 0.5
    xy = rng.normal(size=(n, 2))
    return {
        "orbit depth 8 (13121 words)": lambda nb: kernels.orbit_matrices(r, g, 8, nb),
        "s03 conditions, 1e6 points": lambda nb: kernels.s03_conditions_batch(t, w, nb),
        "projection, %d points" % len(pts): lambda nb: kernels.project_points(A, om, pts, nb),
        "guard margins, 1e6 points": lambda nb: kernels.guard_margins(xy, nb),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"numba available: {kernels.HAVE_NUMBA}")
    print(f"{'kernel':32s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for name, fn in cases().items():
        fn(True)  # compile
        t_np = min(timeit.repeat(lambda: fn(False), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: fn(True), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:32s} {t_np:11.2f} {t_nb:11.2f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
