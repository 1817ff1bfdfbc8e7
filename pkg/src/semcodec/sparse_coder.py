"""Per-item L1-penalized projection onto a dictionary.

Solves argmin_c 0.5*||z - Tc||^2 + lam*||c||_1 by cyclic coordinate
descent (ascending index order, deterministic), plus the standard
optimality diagnostics used to test it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding_store import as_latent
from .errors import DimensionMismatchError
from .kernels import lasso_cd_gram

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 1000


@dataclass
class SolverOptions:
    tol: float = DEFAULT_TOL        # stop when max coefficient change < tol
    max_iter: int = DEFAULT_MAX_ITER  # full coordinate sweeps

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class SparseCode:
    """Non-zero coefficients of one item, indices strictly increasing."""

    n_a: int
    indices: np.ndarray      # (k,) int64, ascending
    coefficients: np.ndarray  # (k,) float64, non-zero
    converged: bool = True
    sweeps: int = 0

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.coefficients = np.asarray(self.coefficients, dtype=np.float64)
        if self.indices.shape != self.coefficients.shape:
            raise ValueError("indices/coefficients length mismatch")
        if self.indices.size:
            if np.any(np.diff(self.indices) <= 0):
                raise ValueError("indices must be strictly increasing")
            if self.indices[0] < 0 or self.indices[-1] >= self.n_a:
                raise ValueError("atom index out of range")
            if not np.all(np.isfinite(self.coefficients)):
                raise ValueError("coefficients must be finite")
            if np.any(self.coefficients == 0.0):
                raise ValueError("coefficients must be non-zero")

    @property
    def k(self) -> int:
        return int(self.indices.size)

    def dense(self) -> np.ndarray:
        c = np.zeros(self.n_a)
        c[self.indices] = self.coefficients
        return c

    @classmethod
    def from_dense(cls, c: np.ndarray, converged: bool = True,
                   sweeps: int = 0) -> "SparseCode":
        c = np.asarray(c, dtype=np.float64)
        idx = np.flatnonzero(c)
        return cls(c.size, idx, c[idx], converged, sweeps)


def _atom_matrix(T) -> np.ndarray:
    """Accept a Dictionary, QuantizedDictionary-like, or raw (n_a, D) array."""
    atoms = getattr(T, "atoms", T)
    if callable(getattr(T, "dequantized_atoms", None)):
        atoms = T.dequantized_atoms()
    atoms = np.asarray(atoms, dtype=np.float64)
    if atoms.ndim != 2:
        raise ValueError("dictionary atoms must form a (n_a, D) matrix")
    return atoms


def lasso_cd(z, T, lam: float, opts: SolverOptions | None = None) -> SparseCode:
    """Coordinate-descent solution of the L1-penalized projection."""
    if lam < 0:
        raise ValueError("lam must be non-negative")
    opts = opts or SolverOptions()
    atoms = _atom_matrix(T)
    z = as_latent(z, dim=atoms.shape[1])
    G = np.ascontiguousarray(atoms @ atoms.T)
    b = np.ascontiguousarray(atoms @ z)
    c, converged, sweeps = lasso_cd_gram(G, b, float(lam),
                                         opts.tol, opts.max_iter)
    return SparseCode.from_dense(np.asarray(c), converged, sweeps)


def lambda_max(z, T) -> float:
    """Smallest penalty that forces the all-zero solution: max_j |t_j . z|."""
    atoms = _atom_matrix(T)
    z = as_latent(z, dim=atoms.shape[1])
    if atoms.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(atoms @ z)))


def kkt_violation(z, T, lam: float, c: SparseCode) -> float:
    """Max subgradient-condition violation of c for the penalized objective.

    Zero at an exact optimum: |t_j . r| <= lam on the zero coefficients,
    t_j . r = lam * sign(c_j) on the active ones, r = z - Tc.
    """
    atoms = _atom_matrix(T)
    z = as_latent(z, dim=atoms.shape[1])
    if c.n_a != atoms.shape[0]:
        raise DimensionMismatchError("code atom count differs from dictionary")
    dense = c.dense()
    r = z - atoms.T @ dense
    g = atoms @ r
    active = dense != 0.0
    viol_zero = np.maximum(np.abs(g[~active]) - lam, 0.0)
    viol_active = np.abs(g[active] - lam * np.sign(dense[active]))
    worst = 0.0
    if viol_zero.size:
        worst = max(worst, float(viol_zero.max()))
    if viol_active.size:
        worst = max(worst, float(viol_active.max()))
    return worst


def objective_value(z, T, c: SparseCode, lam: float) -> float:
    """0.5*||z - Tc||^2 + lam*||c||_1 for one item."""
    atoms = _atom_matrix(T)
    z = as_latent(z, dim=atoms.shape[1])
    resid = z - atoms.T @ c.dense()
    return 0.5 * float(resid @ resid) + lam * float(np.abs(c.coefficients).sum())
