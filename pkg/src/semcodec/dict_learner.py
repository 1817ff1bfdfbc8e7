"""Dictionary learning by alternating sparse coding and atom updates.

Minimizes 0.5*||Z - TC||_F^2 + lam*sum|C| over unit-norm atoms T and
codes C. The atom step is a block coordinate update (MOD-style per atom)
with dead atoms reseeded from the worst-reconstructed training item.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embedding_store import EmbeddingCollection
from .sparse_coder import SolverOptions, SparseCode, lasso_cd

MAX_ATOMS = 4096


@dataclass
class Dictionary:
    """Unit-norm atoms, one per row of a (n_a, D) matrix."""

    atoms: np.ndarray

    def __post_init__(self):
        self.atoms = np.ascontiguousarray(self.atoms, dtype=np.float64)
        if self.atoms.ndim != 2 or self.atoms.shape[0] < 1:
            raise ValueError("atoms must form a non-empty (n_a, D) matrix")
        if not np.all(np.isfinite(self.atoms)):
            raise ValueError("atoms contain NaN/Inf")
        norms = np.linalg.norm(self.atoms, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-6):
            raise ValueError("atoms must have unit L2 norm (within 1e-6)")

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    @property
    def n_a(self) -> int:
        return self.atoms.shape[0]


@dataclass
class LearnOptions:
    seed: int = 0
    max_alternations: int = 100
    rel_obj_tol: float = 1e-4
    coder_opts: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.rel_obj_tol <= 0:
            raise ValueError("rel_obj_tol must be positive")
        if self.max_alternations < 1:
            raise ValueError("max_alternations must be >= 1")


@dataclass
class LearnTrace:
    """Per-alternation objective values; reinit_steps marks alternations
    whose atom update reseeded a dead atom (excluded from monotonicity)."""

    objectives: list[float] = field(default_factory=list)
    reinit_steps: list[int] = field(default_factory=list)


def objective(Z: EmbeddingCollection, T: Dictionary,
              C: list[SparseCode], lam: float) -> float:
    """0.5*||Z - TC||_F^2 + lam * sum of |coefficients|."""
    if len(C) != Z.count:
        raise ValueError("one code per item required")
    data = np.asarray(Z.vectors, dtype=np.float64)
    Cm = _code_matrix(C, T.n_a)
    resid = data - Cm @ T.atoms
    l1 = sum(float(np.abs(c.coefficients).sum()) for c in C)
    return 0.5 * float(np.sum(resid * resid)) + lam * l1


def _code_matrix(C: list[SparseCode], n_a: int) -> np.ndarray:
    Cm = np.zeros((len(C), n_a))
    for i, c in enumerate(C):
        if c.n_a != n_a:
            raise ValueError("code atom count differs from dictionary")
        Cm[i, c.indices] = c.coefficients
    return Cm


def _init_atoms(data: np.ndarray, n_a: int, rng: np.random.Generator) -> np.ndarray:
    """Seed atoms from distinct training items, unit-normalized; when there
    are fewer items than atoms, reuse items with a small perturbation."""
    n, dim = data.shape
    if n >= n_a:
        picks = rng.choice(n, size=n_a, replace=False)
        atoms = data[picks].copy()
    else:
        picks = rng.choice(n, size=n_a, replace=True)
        atoms = data[picks].copy()
        seen: set[int] = set()
        for row, p in enumerate(picks):
            if p in seen:
                atoms[row] += 0.01 * rng.standard_normal(dim)
            seen.add(int(p))
    norms = np.linalg.norm(atoms, axis=1)
    for row in range(n_a):
        while norms[row] < 1e-12:
            atoms[row] = rng.standard_normal(dim)
            norms[row] = np.linalg.norm(atoms[row])
    atoms = atoms / norms[:, None]
    # near-collinear picks (duplicate items) stall the alternation; nudge them
    for row in range(1, n_a):
        while np.max(np.abs(atoms[:row] @ atoms[row])) > 1.0 - 1e-9:
            v = atoms[row] + 0.01 * rng.standard_normal(dim)
            atoms[row] = v / np.linalg.norm(v)
    return atoms


def learn_dictionary(Z: EmbeddingCollection, n_a: int, lam: float,
                     opts: LearnOptions | None = None,
                     trace: LearnTrace | None = None) -> Dictionary:
    """Alternating minimization; deterministic given opts.seed."""
    opts = opts or LearnOptions()
    if Z.count < 1:
        raise ValueError("empty collection")
    if not 1 <= n_a <= MAX_ATOMS:
        raise ValueError(f"n_a must be in [1, {MAX_ATOMS}]")
    data = np.asarray(Z.vectors, dtype=np.float64)
    if not np.all(np.isfinite(data)):
        raise ValueError("collection contains NaN/Inf")

    rng = np.random.default_rng(opts.seed)
    atoms = _init_atoms(data, n_a, rng)
    prev_obj = None

    for step in range(opts.max_alternations):
        T = Dictionary(atoms)
        codes = [lasso_cd(data[i], T, lam, opts.coder_opts)
                 for i in range(Z.count)]
        Cm = _code_matrix(codes, n_a)
        atoms = atoms.copy()
        resid = data - Cm @ atoms  # (N, D)
        reinit = False
        for j in range(n_a):
            cj = Cm[:, j]
            sq = float(cj @ cj)
            if sq <= 0.0:
                # dead atom: reseed from the worst-reconstructed item
                worst = int(np.argmax(np.linalg.norm(resid, axis=1)))
                candidate = data[worst]
                if np.linalg.norm(candidate) < 1e-12:
                    candidate = rng.standard_normal(atoms.shape[1])
                atoms[j] = candidate / np.linalg.norm(candidate)
                reinit = True
                continue
            old = atoms[j].copy()
            new = old * sq + resid.T @ cj
            norm = float(np.linalg.norm(new))
            if norm < 1e-12:
                continue
            new /= norm
            atoms[j] = new
            resid += np.outer(cj, old - new)

        obj = objective(Z, Dictionary(atoms), codes, lam)
        if trace is not None:
            trace.objectives.append(obj)
            if reinit:
                trace.reinit_steps.append(step)
        if prev_obj is not None and not reinit:
            if prev_obj - obj < opts.rel_obj_tol * max(prev_obj, 1e-30):
                break
        prev_obj = obj

    return Dictionary(atoms)


def sparse_code_collection(Z: EmbeddingCollection, T,
                           lam: float,
                           opts: SolverOptions | None = None) -> list[SparseCode]:
    """Code every item against the same dictionary (or raw atom matrix)."""
    return [lasso_cd(Z.item(i), T, lam, opts) for i in range(Z.count)]
