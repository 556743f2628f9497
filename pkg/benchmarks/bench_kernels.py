#!/usr/bin/env python3
"""numba vs numpy for the Smith-mod-N kernel and the ring-table checks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call includes compilation; it is timed separately.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from torsor.algebra.finite_ring import finite_ring_build
from torsor.kernels import check_ring_tables, smith_mod


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_smith(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n, N in ((8, 12), (32, 30), (96, 2), (160, 36)):
        A = rng.integers(0, N, size=(n, n + n // 2))
        t = time.perf_counter()
        smith_mod(A, N, backend="numba")
        first = time.perf_counter() - t
        nb = _best(lambda: smith_mod(A, N, backend="numba"), repeat)
        npy = _best(lambda: smith_mod(A, N, backend="numpy"), repeat)
        d1 = smith_mod(A, N, backend="numba")[0]
        d2 = smith_mod(A, N, backend="numpy")[0]
        assert np.array_equal(d1, d2), "backends disagree"
        rows.append((f"smith {n}x{A.shape[1]} mod {N}", first, nb, npy))
    return rows


def bench_tables(repeat):
    rows = []
    for name in ("Z/12", "F2xF4", "Z/30", "Z/64"):
        R = finite_ring_build(name)
        t = time.perf_counter()
        check_ring_tables(R.add_table, R.mul_table, backend="numba")
        first = time.perf_counter() - t
        nb = _best(lambda: check_ring_tables(R.add_table, R.mul_table, backend="numba"), repeat)
        npy = _best(lambda: check_ring_tables(R.add_table, R.mul_table, backend="numpy"), repeat)
        rows.append((f"ring axioms {name} ({R.size}^3)", first, nb, npy))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'case':<34}{'numba 1st':>12}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for case, first, nb, npy in bench_smith(args.repeat) + bench_tables(args.repeat):
        print(f"{case:<34}{first:>11.4f}s{nb:>11.5f}s{npy:>11.5f}s{npy / nb:>9.1f}x")


if __name__ == "__main__":
    main()
