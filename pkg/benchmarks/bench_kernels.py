"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from tentlimit import _kernels as K
from tentlimit.chains import build_chain
from tentlimit.symbolic import _encode, ladder_nu
from tentlimit.tentmap import Slope


def best_of(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    sym = _encode(ladder_nu().prefix(200_000))
    s = Slope.parse("7/4")
    fine, coarse = build_chain(s, 11), build_chain(s, 10)
    qf, Fa = fine.scaled
    qc, Ca = coarse.scaled
    Cs = Ca * (qf // qc)
    return {
        "grid_roots (s=1.75, j=10, 2^16 grid)": (
            lambda: K.grid_roots_numba(1.75, 10, 0.0, 0.5, 1 << 16),
            lambda: K.grid_roots_numpy(1.75, 10, 0.0, 0.5, 1 << 16),
        ),
        "orbit_histogram (10^6 steps)": (
            lambda: K.orbit_histogram_numba(1.75, 1_000_000, 256, 64),
            lambda: K.orbit_histogram_numpy(1.75, 1_000_000, 256, 64),
        ),
        "window_codes (radius 6, 2e5 symbols)": (
            lambda: K.window_codes_numba(sym, 100_000, 6),
            lambda: K.window_codes_numpy(sym, 100_000, 6),
        ),
        f"refinement_assign (7/4, {fine.size} links)": (
            lambda: K.refinement_assign_numba(Fa, Cs, 7, 4, qf),
            lambda: K.refinement_assign_numpy(Fa, Cs, 7, 4, qf),
        ),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"numba available: {K.NUMBA_AVAILABLE}")
    print(f"{'kernel':45s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, (fast, slow) in cases().items():
        a, b = fast(), slow()
        same = np.array_equal(np.sort(np.atleast_1d(a)), np.sort(np.atleast_1d(b))) or np.allclose(
            np.sort(np.atleast_1d(a)), np.sort(np.atleast_1d(b))
        )
        tf, ts = best_of(fast, args.repeat), best_of(slow, args.repeat)
        print(f"{name:45s} {tf * 1e3:10.2f} {ts * 1e3:10.2f} {ts / tf:8.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
