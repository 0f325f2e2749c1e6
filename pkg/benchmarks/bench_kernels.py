#!/usr/bin/env python3
"""Benchmark the njit kernels against their interpreted numpy twins.

Usage: python benchmarks/bench_kernels.py [--nodes 2048] [--pairs 20000]

Runs each hot kernel through both paths on identical inputs, verifies the
outputs agree, and prints best-of-three timings.  The interpreted path is
what ``DSRIGIDITY_BACKEND=numpy`` selects at import time.
"""

import argparse
import math
import time

import numpy as np

from dsrigidity import kernels
from dsrigidity.surfaces import AnalyticSurface


def _surface_inputs(n_nodes):
    rng = np.random.default_rng(7)
    theta = rng.uniform(0.1, math.pi - 0.1, n_nodes)
    phi = rng.uniform(0.0, 2.0 * math.pi, n_nodes)
    surface = AnalyticSurface(0.6, [(0.05, 2, 0), (0.03, 3, 1)])
    return theta, surface.jets(theta, phi)


def _core_outputs(n):
    return (
        np.empty(n), np.empty((n, 2, 2)), np.empty((n, 2, 2)), np.empty(n),
        np.empty((n, 3)), np.empty(n), np.empty((n, 2, 2)), np.empty((n, 2, 2)),
        np.empty((n, 2, 2)), np.empty((n, 2, 2)), np.empty((n, 2, 2)),
        np.empty(n), np.empty(n), np.empty(n), np.empty((n, 2, 2, 2)),
        np.empty((n, 2, 2, 2)), np.empty(n), np.empty((n, 2)),
    )


def _time(func, *args, repeats=3):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_surface(n_nodes):
    theta, (y, dy, d2y, d3y) = _surface_inputs(n_nodes)
    n = n_nodes
    rows = []

    outs_py = _core_outputs(n)
    outs_nb = _core_outputs(n)
    t_py = _time(kernels.surface_core_py, theta, y, dy, d2y, *outs_py)
    kernels.surface_core_nb(theta, y, dy, d2y, *outs_nb)  # compile
    t_nb = _time(kernels.surface_core_nb, theta, y, dy, d2y, *outs_nb)
    agree = max(np.abs(a - b).max() for a, b in zip(outs_py, outs_nb))
    rows.append(("surface_core", n, t_py, t_nb, agree))

    margin, g, ginv, detg, nu, sup, h, wch, frame, wfr, hf, s1, s2, pre, gam, dg, nn, nt = outs_nb
    ko = (np.empty(n), np.empty(n), np.empty(n))
    ko2 = (np.empty(n), np.empty(n), np.empty(n))
    t_py = _time(
        kernels.curvature_fields_py,
        theta, y, dy, d2y, d3y, ginv, detg, h, wch, gam, dg, s2, *ko,
    )
    kernels.curvature_fields_nb(
        theta, y, dy, d2y, d3y, ginv, detg, h, wch, gam, dg, s2, *ko2
    )
    t_nb = _time(
        kernels.curvature_fields_nb,
        theta, y, dy, d2y, d3y, ginv, detg, h, wch, gam, dg, s2, *ko2,
    )
    agree = max(np.abs(a - b).max() for a, b in zip(ko, ko2))
    rows.append(("curvature_fields", n, t_py, t_nb, agree))
    return rows


def bench_garding(n_pairs):
    rng = np.random.default_rng(11)
    n = 4
    a = rng.uniform(-5.0, 5.0, (n_pairs, n, n))
    a = 0.5 * (a + np.transpose(a, (0, 2, 1)))
    b = rng.uniform(-5.0, 5.0, (n_pairs, n, n))
    b = 0.5 * (b + np.transpose(b, (0, 2, 1)))
    outs = lambda: (
        np.empty(n_pairs), np.empty(n_pairs), np.empty(n_pairs),
        np.empty(n_pairs), np.empty((n_pairs, 2)),
        np.empty(n_pairs, dtype=np.int8),
    )
    o_py, o_nb = outs(), outs()
    t_py = _time(kernels.garding_batch_py, a, b, *o_py)
    kernels.garding_batch_nb(a, b, *o_nb)
    t_nb = _time(kernels.garding_batch_nb, a, b, *o_nb)
    agree = max(np.abs(x - y).max() for x, y in zip(o_py[:5], o_nb[:5]))
    return [("garding_batch", n_pairs, t_py, t_nb, agree)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=2048)
    parser.add_argument("--pairs", type=int, default=20000)
    args = parser.parse_args()

    if kernels.surface_core_nb is None:
        raise SystemExit("numba unavailable; nothing to compare")

    rows = bench_surface(args.nodes) + bench_garding(args.pairs)
    print(f"{'kernel':<18} {'size':>8} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}  agree")
    for name, size, t_py, t_nb, agree in rows:
        print(
            f"{name:<18} {size:>8} {t_py * 1e3:>12.2f} {t_nb * 1e3:>12.2f} "
            f"{t_py / t_nb:>8.1f}x  {agree:.1e}"
        )


if __name__ == "__main__":
    main()
