#!/usr/bin/env python3
"""Benchmark the compiled row-reduction kernel against the numpy fallback.

Two parts:
  * micro: rref on random F_p matrices, including the exact shape of the
    heaviest production workload (the degree-40 regular-sequence check
    reduces a 1255 x 1771 matrix over F_3);
  * end-to-end: the full regular-sequence verification, run in a fresh
    interpreter per backend (backend selection happens at import time).

Usage: python benchmarks/bench_kernels.py [--skip-e2e]
"""

import argparse
import subprocess
import sys
import time

import numpy as np

from coniveau._kernels import _pyref

try:
    from coniveau._kernels import _gfcore
except ImportError:
    _gfcore = None

SHAPES = [
    (200, 300, 2),
    (500, 700, 3),
    (1255, 1771, 3),  # degree-40 regular-sequence workload
    (800, 800, 5),
]

E2E = (
    "import time, coniveau.certificates as C; "
    "t = time.perf_counter(); "
    "r, _, _ = C.comparison_regular_pair(3, 40); "
    "assert r.regular; "
    "print('%.2f' % (time.perf_counter() - t))"
)


def time_call(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def micro():
    print(f"{'shape':>14} {'p':>2} {'numpy':>9} {'cython':>9} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for m, n, p in SHAPES:
        mat = rng.integers(0, p, size=(m, n)).astype(np.int64)
        t_py = time_call(lambda: _pyref.rref_inplace(mat.copy(), p), repeat=2)
        if _gfcore is None:
            print(f"{m}x{n:>7} {p:>2} {t_py:>8.3f}s   (extension not built)")
            continue
        t_cy = time_call(lambda: _gfcore.rref_inplace(mat.copy(), p), repeat=2)
        a, b = mat.copy(), mat.copy()
        assert _pyref.rref_inplace(a, p) == _gfcore.rref_inplace(b, p)
        assert np.array_equal(a, b)
        print(f"{m}x{n:>7} {p:>2} {t_py:>8.3f}s {t_cy:>8.3f}s {t_py / t_cy:>7.1f}x")


def end_to_end():
    print("\nregular-sequence check through degree 40 (fresh interpreter per backend):")
    for label, env in (("cython", {}), ("numpy", {"CONIVEAU_KERNEL": "python"})):
        import os

        merged = {**os.environ, **env}
        out = subprocess.run(
            [sys.executable, "-c", E2E], env=merged, capture_output=True, text=True
        )
        if out.returncode != 0:
            print(f"  {label:>7}: failed\n{out.stderr}")
        else:
            print(f"  {label:>7}: {out.stdout.strip()}s")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--skip-e2e", action="store_true")
    args = parser.parse_args()
    micro()
    if not args.skip_e2e:
        end_to_end()
