"""Pure-Python (NumPy) coordinate-descent kernel.

Fallback used when the compiled extension is unavailable. Must stay
algorithmically identical to `_speedups.pyx`: ascending sweep order,
soft threshold on t_j.(r + t_j c_j), stop on max coefficient change.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def lasso_cd_gram(G: np.ndarray, b: np.ndarray, lam: float,
                  tol: float, max_iter: int):
    """Coordinate descent on 0.5*||z - Tc||^2 + lam*||c||_1 in Gram form.

    G = T T^T (n_a x n_a), b = T z (n_a,). Returns (c, converged, sweeps).
    """
    n_a = b.shape[0]
    c = np.zeros(n_a)
    q = np.zeros(n_a)  # q = G @ c, maintained incrementally
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
                q += G[:, j] * delta
                c[j] = new
                if abs(delta) > max_delta:
                    max_delta = abs(delta)
        if max_delta < tol:
            return c, True, sweep + 1
    return c, False, max_iter
