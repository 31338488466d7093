"""Benchmark: compiled tree-growing kernel vs the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--rows N] [--features K] [--trees T]

Trains the same boosted ensemble through each available kernel and reports
wall time plus the speedup. The two kernels build bit-identical trees, so
the comparison is apples to apples.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from metaland.valuation import boosting
from metaland.valuation.kernels import available_kernels


def run(kernel, X, y, params, seed=7):
    original = boosting.grow_tree
    boosting.grow_tree = kernel.grow_tree
    try:
        start = time.perf_counter()
        model = boosting.train_gbt(X, y, params, seed=seed)
        elapsed = time.perf_counter() - start
    finally:
        boosting.grow_tree = original
    return elapsed, model


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=4000)
    parser.add_argument("--features", type=int, default=11)
    parser.add_argument("--trees", type=int, default=100)
    parser.add_argument("--depth", type=int, default=4)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    X = rng.normal(size=(args.rows, args.features))
    y = X[:, 0] * 3 + np.sin(X[:, 1] * 2) + rng.normal(0, 0.3, args.rows)
    params = boosting.GbtParams(n_trees=args.trees, max_depth=args.depth, subsample=0.8, colsample=0.8)

    print(f"rows={args.rows} features={args.features} trees={args.trees} depth={args.depth}")
    results = {}
    reference = None
    for name, kernel in sorted(available_kernels().items()):
        elapsed, model = run(kernel, X, y, params)
        preds = model.predict(X)
        if reference is None:
            reference = preds
        else:
            assert np.array_equal(reference, preds), "kernels disagree"
        results[name] = elapsed
        print(f"  {name:8s} {elapsed:8.3f} s   final train loss {model.train_losses[-1]:.5f}")

    if len(results) == 2:
        print(f"  speedup  {results['python'] / results['cython']:8.1f} x (cython over python)")
    else:
        print("  (compiled kernel unavailable; rebuild with `pip install -e .` to compare)")


if __name__ == "__main__":
    main()
