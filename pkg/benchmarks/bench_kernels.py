"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Operands are dense random units of U(m, k) so both paths see identical work;
results are checked for equality before timing.
"""

import argparse
import time

import numpy as np

from respk import _kernels
from respk.lab import TableGroup
from respk.truncpoly import TruncatedPoly, ring


def random_unit(R, rng, density):
    terms = {(): 1}
    for d in range(1, R.k):
        for _ in range(max(1, int(density * R.m**d))):
            mono = tuple(int(s) for s in rng.integers(0, R.m, d))
            terms[mono] = int(rng.integers(1, R.p))
    return TruncatedPoly.from_terms(R, terms)


def best_of(fn, repeat):
    out = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t)
    return out


def bench_poly(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for p, m, k, q in [(2, 2, 8, None), (3, 2, 7, None), (2, 3, 6, 4), (2, 4, 5, None)]:
        R = ring(p, m, k, q)
        a, b = random_unit(R, rng, 0.5), random_unit(R, rng, 0.5)
        args = (a.idx, a.coef, b.idx, b.coef, R.off, R.pw, R.m, R.k, R.q or 0, R.p)
        ref = _kernels.poly_mul_numpy(*args)
        got = _kernels.poly_mul(*args)
        assert all(np.array_equal(x, y) for x, y in zip(ref, got))
        t_np = best_of(lambda: _kernels.poly_mul_numpy(*args), repeat)
        t_fast = best_of(lambda: _kernels.poly_mul(*args), repeat)
        rows.append((f"poly_mul U({m},{k}{','+str(q) if q else ''}) p={p} terms={len(a.idx)}", t_np, t_fast))
    return rows


def bench_closure(repeat):
    rows = []
    n = 2048
    ar = np.arange(n)
    G = TableGroup((ar[:, None] + ar[None, :]) % n, [2, 3], name=f"C{n}")
    gens = list(G.gens)
    ref = _kernels.closure_numpy(G.table, gens)
    assert np.array_equal(ref, _kernels.closure(G.table, gens))
    t_np = best_of(lambda: _kernels.closure_numpy(G.table, gens), repeat)
    t_fast = best_of(lambda: _kernels.closure(G.table, gens), repeat)
    rows.append((f"closure order={G.order}", t_np, t_fast))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    print(f"backend: {_kernels.BACKEND}")
    print(f"{'kernel':48s} {'numpy [ms]':>11s} {_kernels.BACKEND + ' [ms]':>11s} {'speedup':>8s}")
    for name, t_np, t_fast in bench_poly(args.repeat) + bench_closure(args.repeat):
        print(f"{name:48s} {1e3 * t_np:11.3f} {1e3 * t_fast:11.3f} {t_np / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
