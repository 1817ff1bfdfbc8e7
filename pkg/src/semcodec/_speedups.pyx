# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled coordinate-descent kernel; mirrors _kernels_py exactly."""

import numpy as np

BACKEND = "cython"


def lasso_cd_gram(double[:, ::1] G, double[::1] b, double lam,
                  double tol, int max_iter):
    """Coordinate descent in Gram form; see _kernels_py.lasso_cd_gram."""
    cdef Py_ssize_t n_a = b.shape[0]
    c_arr = np.zeros(n_a)
    q_arr = np.zeros(n_a)
    cdef double[::1] c = c_arr
    cdef double[::1] q = q_arr
    cdef Py_ssize_t j, k, sweep
    cdef double gjj, rho, new, delta, max_delta, ad

    for sweep in range(max_iter):
        max_delta = 0.0
        for j in range(n_a):
            gjj = G[j, j]
            if gjj <= 0.0:
                continue
            rho = b[j] - q[j] + gjj * c[j]
            if rho > lam:
                new = (rho - lam) / gjj
            elif rho < -lam:
                new = (rho + lam) / gjj
            else:
                new = 0.0
            delta = new - c[j]
            if delta != 0.0:
                for k in range(n_a):
                    q[k] += G[k, j] * delta
                c[j] = new
                ad = delta if delta > 0.0 else -delta
                if ad > max_delta:
                    max_delta = ad
        if max_delta < tol:
            return c_arr, True, sweep + 1
    return c_arr, False, max_iter
