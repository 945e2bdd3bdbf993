#!/usr/bin/env python3
"""Benchmark the split-search kernels and full forest training.

Compares the compiled kernel against the numpy fallback on identical
inputs, asserting along the way that both return the same splits. Run:

    python benchmarks/bench_split.py
"""

import time

import numpy as np

from paydev.ml import fit_forest, kernels, make_dataset
from paydev.ml.kernels import available_backends


def time_it(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_best_split():
    rng = np.random.default_rng(0)
    backends = available_backends()
    print(f"{'n':>8} {'p':>3}", *(f"{name:>12}" for name in backends), f"{'speedup':>9}")
    for n, p in [(1_000, 16), (10_000, 16), (100_000, 16)]:
        X = np.ascontiguousarray(rng.normal(size=(n, p)))
        y = (rng.random(n) < 0.5).astype(np.int8)
        idx = np.arange(n, dtype=np.int64)
        feats = np.arange(p, dtype=np.int64)
        times, results = {}, {}
        for name, fn in backends.items():
            times[name] = time_it(lambda fn=fn: fn(X, y, idx, feats))
            results[name] = fn(X, y, idx, feats)
        first = next(iter(results.values()))
        assert all(r == first for r in results.values()), "backends disagree"
        speedup = (
            times["python"] / times["cython"] if {"python", "cython"} <= set(times) else 0.0
        )
        print(
            f"{n:>8} {p:>3}",
            *(f"{times[name] * 1e3:>10.2f}ms" for name in backends),
            f"{speedup:>8.1f}x",
        )


def bench_forest():
    rng = np.random.default_rng(1)
    n, p = 2_000, 16
    X = rng.normal(size=(n, p))
    y = (X[:, 0] + rng.normal(scale=0.7, size=n) > 0).astype(int)
    data = make_dataset(X, y, [f"f{i}" for i in range(p)], [str(i) for i in range(n)])
    print(f"\nfit_forest (n={n}, p={p}, 25 trees, fully grown):")
    saved = kernels.best_split
    try:
        for name, fn in available_backends().items():
            kernels.best_split = fn
            t = time_it(lambda: fit_forest(data, n_trees=25, seed=0), repeats=2)
            print(f"  {name:>8}: {t:.2f}s")
    finally:
        kernels.best_split = saved


if __name__ == "__main__":
    print(f"active backend: {kernels.BACKEND}\n\nbest_split on one node:")
    bench_best_split()
    bench_forest()
