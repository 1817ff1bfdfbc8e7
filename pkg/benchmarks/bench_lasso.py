"""Benchmark the compiled lasso kernel against the pure-NumPy fallback.

Usage: python3 benchmarks/bench_lasso.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from semcodec._kernels_py import lasso_cd_gram as py_kernel

try:
    from semcodec._speedups import lasso_cd_gram as c_kernel
except ImportError:
    c_kernel = None


def make_problems(n_problems, n_a, dim, seed=0):
    rng = np.random.default_rng(seed)
    problems = []
    for _ in range(n_problems):
        T = rng.standard_normal((n_a, dim))
        T /= np.linalg.norm(T, axis=1)[:, None]
        z = rng.standard_normal(dim) * 20
        problems.append((np.ascontiguousarray(T @ T.T),
                         np.ascontiguousarray(T @ z)))
    return problems


def time_kernel(kernel, problems, lam, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for G, b in problems:
            kernel(G, b, lam, 1e-8, 1000)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    configs = [(200, 16, 32), (100, 64, 128), (50, 128, 768), (20, 512, 768)]
    print(f"{'problems':>8} {'n_a':>5} {'dim':>5} "
          f"{'python (s)':>11} {'cython (s)':>11} {'speedup':>8}")
    for n_problems, n_a, dim in configs:
        problems = make_problems(n_problems, n_a, dim)
        t_py = time_kernel(py_kernel, problems, 0.1, args.repeats)
        if c_kernel is None:
            print(f"{n_problems:>8} {n_a:>5} {dim:>5} {t_py:>11.4f} "
                  f"{'n/a':>11} {'n/a':>8}")
            continue
        t_c = time_kernel(c_kernel, problems, 0.1, args.repeats)
        for G, b in problems[:5]:
            ref = np.asarray(py_kernel(G, b, 0.1, 1e-8, 1000)[0])
            got = np.asarray(c_kernel(G, b, 0.1, 1e-8, 1000)[0])
            assert np.array_equal(ref, got), "backend mismatch"
        print(f"{n_problems:>8} {n_a:>5} {dim:>5} {t_py:>11.4f} "
              f"{t_c:>11.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
