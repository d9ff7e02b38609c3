#!/usr/bin/env python3
"""Benchmark the orbit-labeling kernel: numba JIT vs the pure-numpy fallback.

Two workloads:
  * synthetic: random permutations of a flat state space
  * pair scan: simultaneous-conjugation moves on G x G for a dihedral group,
    the shape every hot loop in the package reduces to

Run:  python benchmarks/bench_kernels.py [--sizes 10000 250000 1000000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from taumackey import _kernels, groups


def time_fn(fn, moves, repeats=3):
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(moves)
        best = min(best, time.perf_counter() - t0)
    return best, out


def random_moves(n_states: int, n_moves: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.stack([rng.permutation(n_states) for _ in range(n_moves)])


def conjugation_pair_moves(n_gon: int) -> np.ndarray:
    g = groups.dihedral(n_gon)
    cmaps = g.generator_conj_maps()
    n = g.order
    return np.stack([(c[:, None] * n + c[None, :]).reshape(-1) for c in cmaps])


def compare(name: str, moves: np.ndarray) -> None:
    rows = [("numpy", _kernels.orbit_labels_numpy)]
    if _kernels.HAS_NUMBA:
        rows.append(("numba", _kernels.orbit_labels_numba))
    results = {}
    for label, fn in rows:
        secs, out = time_fn(fn, moves)
        results[label] = (secs, out)
        states = moves.shape[1]
        print(f"  {name:<28} {label:<6} {secs * 1e3:9.2f} ms   "
              f"({states} states, {moves.shape[0]} moves, "
              f"{len(np.unique(out))} orbits)")
    if len(results) == 2:
        a, b = results["numpy"], results["numba"]
        assert np.array_equal(a[1], b[1]), "paths disagree!"
        print(f"  {name:<28} speedup numba/numpy: {a[0] / b[0]:.1f}x")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[10_000, 250_000, 1_000_000])
    args = parser.parse_args()
    if _kernels.HAS_NUMBA:
        _kernels.warm_up()
    else:
        print("numba not importable; timing the numpy path only")
    print("synthetic random permutations:")
    for n in args.sizes:
        compare(f"random n={n}", random_moves(n, 3, seed=n))
    print("conjugation on pairs of group elements:")
    for n_gon in (100, 500, 1000):
        compare(f"dihedral({n_gon}) pairs", conjugation_pair_moves(n_gon))


if __name__ == "__main__":
    main()
