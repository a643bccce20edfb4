#!/usr/bin/env python3
"""Benchmark the compiled elimination kernels against the pure-Python twin.

Workloads mirror where the library actually spends time: PSD certification
and reduced row echelon form on dense small-entry Hermitian matrices, rank
of rectangular matrices, and an end-to-end slice (partial-transpose
certification of the rank-5 fixtures).

Run:  python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time
from math import gcd

from upblab._kernels import available_backends, reference


def _rand_triple(rng):
    p, q, r = rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(1, 5)
    g = gcd(p, q, r)
    return (p // g, q // g, r // g) if g > 1 else (p, q, r)


def dense_hermitian(rng, n):
    """G G-dagger over small random entries: dense, moderate numerators."""
    g = [[_rand_triple(rng) for _ in range(n)] for _ in range(n)]
    add, mul = reference._add, reference._mul
    h = [[(0, 0, 1)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = (0, 0, 1)
            for k in range(n):
                acc = add(acc, mul(g[i][k], (g[j][k][0], -g[j][k][1], g[j][k][2])))
            h[i][j] = acc
    return h


def rect_matrix(rng, nr, nc):
    return [[_rand_triple(rng) for _ in range(nc)] for _ in range(nr)]


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def fixture_workload():
    from upblab.catalog import fixture
    from upblab.states import bipartition_classes, partial_transpose

    rho = fixture("rank5_pptes_5q")
    mats = [
        partial_transpose(rho, mask).matrix._triple_rows()
        for mask in bipartition_classes(rho.parties)
    ]
    return mats, rho.dim


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = [("python", reference)]
    if "compiled" in available_backends():
        from upblab._kernels import _fast

        backends.append(("compiled", _fast))
    else:
        print("note: compiled kernels not built; run `python setup.py build_ext --inplace`")

    rng = random.Random(2)
    h12 = dense_hermitian(rng, 12)
    h20 = dense_hermitian(rng, 20)
    rect = rect_matrix(rng, 24, 30)
    pt_mats, dim = fixture_workload()

    cases = [
        ("ldl_hermitian 12x12 dense", lambda mod: mod.ldl_hermitian(h12, 12)),
        ("ldl_hermitian 20x20 dense", lambda mod: mod.ldl_hermitian(h20, 20)),
        ("rref 20x20 dense", lambda mod: mod.rref(h20, 20, 20)),
        ("bareiss_rank 24x30", lambda mod: mod.bareiss_rank(rect, 24, 30)),
        (
            f"15 transpose certificates {dim}x{dim} (fixture)",
            lambda mod: [mod.ldl_hermitian(m, dim) for m in pt_mats],
        ),
    ]

    width = max(len(name) for name, _ in cases)
    header = f"{'workload'.ljust(width)}  " + "  ".join(
        f"{name:>10}" for name, _ in backends
    )
    if len(backends) == 2:
        header += "  speedup"
    print(header)
    print("-" * len(header))
    for name, job in cases:
        times = []
        results = []
        for _, mod in backends:
            results.append(job(mod))
            times.append(time_call(lambda m=mod: job(m), args.repeat))
        if len(results) == 2 and results[0] != results[1]:
            raise SystemExit(f"backend disagreement on {name!r}")
        row = f"{name.ljust(width)}  " + "  ".join(f"{t * 1000:8.2f}ms" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:6.2f}x"
        print(row)
    if len(backends) == 2:
        print("\nresults agree exactly between backends")


if __name__ == "__main__":
    main()
