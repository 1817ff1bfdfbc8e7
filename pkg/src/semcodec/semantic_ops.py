"""Latent-space arithmetic: renormalization, weighted combination, cosine.

Adding a latent adds its semantics, subtracting removes them; the weight
magnitude controls how strongly. Results are rescaled to the generator's
operating norm (default 20).
"""

from __future__ import annotations

import numpy as np

from .embedding_store import as_latent
from .errors import DegenerateVectorError, DimensionMismatchError

DEFAULT_TARGET_NORM = 20.0

# Norms below this are treated as zero: far under any realistic embedding
# magnitude, far above denormal noise.
NORM_EPS = 1e-12


def renormalize(v, target_norm: float = DEFAULT_TARGET_NORM) -> np.ndarray:
    """Scale v to the requested L2 norm."""
    if target_norm <= 0:
        raise ValueError("target_norm must be positive")
    v = as_latent(v)
    norm = float(np.linalg.norm(v))
    if norm < NORM_EPS:
        raise DegenerateVectorError("cannot renormalize a (near-)zero vector")
    return v * (target_norm / norm)


def combine(z1, z2, lam: float,
            target_norm: float = DEFAULT_TARGET_NORM) -> np.ndarray:
    """Renormalized z1 + lam * z2 (lam > 0 adds semantics, lam < 0 removes)."""
    z1 = as_latent(z1)
    z2 = as_latent(z2)
    if z1.size != z2.size:
        raise DimensionMismatchError(f"dims differ: {z1.size} vs {z2.size}")
    return renormalize(z1 + lam * z2, target_norm)


def cosine(z1, z2) -> float:
    """Cosine similarity of two non-zero latents."""
    z1 = as_latent(z1)
    z2 = as_latent(z2)
    if z1.size != z2.size:
        raise DimensionMismatchError(f"dims differ: {z1.size} vs {z2.size}")
    n1 = float(np.linalg.norm(z1))
    n2 = float(np.linalg.norm(z2))
    if n1 < NORM_EPS or n2 < NORM_EPS:
        raise DegenerateVectorError("cosine undefined for zero vectors")
    return float(np.clip(np.dot(z1, z2) / (n1 * n2), -1.0, 1.0))
