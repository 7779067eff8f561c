"""Micro-benchmark of the hot kernels: numba fast path vs numpy fallback.

Run as ``python -m ttpsolve.kernel_bench`` or ``ttpsolve bench-kernels``.
With ``TTPSOLVE_NO_NUMBA=1`` only the fallback is timed.
"""

import time

import numpy as np

from . import _kernels


def _bench(fn, args, repeats):
    fn(*args)  # warm-up (and jit compile)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run_benchmark(repeats=5, column_size=20000, items=50, cities=76, pop=50,
                  generations=200):
    rng = np.random.default_rng(0)

    # DP column merge on a synthetic staircase
    w = np.sort(rng.choice(np.arange(1, 10 * column_size), column_size, replace=False))
    b = np.sort(rng.random(column_size)) * 1000
    merge_args = (w.astype(np.int64), b, 37, 450.0, 300.0, 1.0, 1e-4,
                  int(w[-1]) + 100)

    def dp_loop(fn):
        cw, cb = merge_args[0], merge_args[1]
        for _ in range(items):
            cw, cb, _, _ = fn(cw, cb, *merge_args[2:])

    print(f"DP column merge ({items} columns of ~{column_size} cells):")
    t_py = _bench(lambda *a: dp_loop(_kernels.dp_merge_py), (), repeats)
    print(f"  numpy fallback: {t_py * 1e3:8.2f} ms")
    if _kernels.dp_merge_jit is not None:
        t_jit = _bench(lambda *a: dp_loop(_kernels.dp_merge_jit), (), repeats)
        print(f"  numba         : {t_jit * 1e3:8.2f} ms   ({t_py / t_jit:.1f}x)")
    else:
        print("  numba         : disabled (TTPSOLVE_NO_NUMBA)")

    # Inver-over generation loop on a random euclidean instance
    coords = rng.random((cities, 2)) * 100
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.ceil(np.sqrt((diff * diff).sum(-1))).astype(np.int64)

    def make_pop():
        p = np.empty((pop, cities), np.int64)
        r = np.random.default_rng(1)
        for s in range(pop):
            p[s] = r.permutation(cities)
        return p

    print(f"Inver-over ({pop} tours x {cities} cities x {generations} generations):")
    t_py = _bench(lambda: _kernels.inver_over_py(make_pop(), dist, generations, 0.02, 7),
                  (), repeats)
    print(f"  python fallback: {t_py * 1e3:8.2f} ms")
    if _kernels.inver_over_jit is not None:
        t_jit = _bench(lambda: _kernels.inver_over_jit(make_pop(), dist, generations, 0.02, 7),
                       (), repeats)
        print(f"  numba          : {t_jit * 1e3:8.2f} ms   ({t_py / t_jit:.1f}x)")
    else:
        print("  numba          : disabled (TTPSOLVE_NO_NUMBA)")


if __name__ == "__main__":
    run_benchmark()
