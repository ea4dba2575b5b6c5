"""Time the enumeration kernels with numba and with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 18] [--m 10] [--repeat 3]

The first numba call per kernel is a warm-up and is not timed (compilation
is cached on disk after the first run).
"""

import argparse
import os
import time

import numpy as np

from qipsearch import _kernels as K


def _timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(n, m, repeat, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(-5, 6, size=(m, n))
    b = rng.integers(0, 3 * n, size=m)
    c = rng.integers(-5, 6, size=n)
    universal = rng.random(n) < 0.3
    C = rng.integers(-5, 6, size=(4, n))
    d = rng.integers(-5, 6, size=4)

    cases = {
        "leaf_values": lambda: K.leaf_values(A, b, c),
        "fold_minimax": lambda: K.fold_minimax(leaves, universal)[0],
        "min_epigraph": lambda: K.min_epigraph(A, b, C, d),
    }
    leaves = K.leaf_values(A, b, c)
    print(f"n={n} m={m} leaves={1 << n} repeat={repeat}")
    print(f"{'kernel':<14} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  same")
    for name, fn in cases.items():
        os.environ.pop("QIPSEARCH_DISABLE_NUMBA", None)
        fn()  # warm-up / compile
        t_nb, r_nb = _timed(fn, repeat)
        os.environ["QIPSEARCH_DISABLE_NUMBA"] = "1"
        t_np, r_np = _timed(fn, repeat)
        os.environ.pop("QIPSEARCH_DISABLE_NUMBA", None)
        same = np.array_equal(np.asarray(r_nb), np.asarray(r_np))
        print(f"{name:<14} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>7.1f}x  {same}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=18)
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not K.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    run(args.n, args.m, args.repeat, args.seed)


if __name__ == "__main__":
    main()
