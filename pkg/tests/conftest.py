import numpy as np
import pytest

from semcodec import EmbeddingCollection


def planted_collection(seed: int, dim: int, n_atoms: int, n_items: int,
                       sparsity: int = 3, noise: float = 0.01,
                       norm: float = 20.0):
    """Collection generated from a planted unit-norm dictionary.

    Items are `sparsity`-sparse positive combinations of random unit
    atoms plus relative Gaussian noise, renormalized to `norm`.
    Returns (collection, generator_atoms).
    """
    rng = np.random.default_rng(seed)
    atoms = rng.standard_normal((n_atoms, dim))
    atoms /= np.linalg.norm(atoms, axis=1)[:, None]
    data = np.zeros((n_items, dim))
    for i in range(n_items):
        support = rng.choice(n_atoms, size=min(sparsity, n_atoms),
                             replace=False)
        weights = rng.uniform(0.5, 1.5, size=support.size)
        v = weights @ atoms[support]
        v = v + noise * np.linalg.norm(v) * rng.standard_normal(dim)
        data[i] = norm * v / np.linalg.norm(v)
    return EmbeddingCollection(data.astype(np.float32)), atoms


@pytest.fixture
def small_planted():
    return planted_collection(seed=7, dim=32, n_atoms=8, n_items=50)
