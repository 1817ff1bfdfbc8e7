"""Uniform scalar quantization of atoms and coefficients.

Symmetric mid-tread grid, per-block max-abs scaling: one float scale per
atom (or per item's coefficient list), levels in the signed range
[-(2^(b-1)-1), 2^(b-1)-1]. Rounding is half away from zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dict_learner import Dictionary
from .sparse_coder import SparseCode

MIN_BITS = 1
MAX_BITS = 16


def _check_bits(bits: int) -> None:
    if not MIN_BITS <= bits <= MAX_BITS:
        raise ValueError(f"bits must be in [{MIN_BITS}, {MAX_BITS}]")


def quantize_uniform(values, bits: int) -> tuple[np.ndarray, float]:
    """Quantize to signed levels plus one scale; returns (levels, scale).

    bits >= 2: scale = maxabs/(2^(bits-1)-1), level = clamp(round(v/scale)).
    bits == 1: scale = maxabs, levels are +-1 by sign (zero maps to +1).
    All-zero input yields scale 0 and all-zero levels.
    """
    _check_bits(bits)
    v = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ValueError("values contain NaN/Inf")
    maxabs = float(np.max(np.abs(v))) if v.size else 0.0
    if maxabs == 0.0:
        return np.zeros(v.shape, dtype=np.int32), 0.0
    if bits == 1:
        levels = np.where(v >= 0.0, 1, -1).astype(np.int32)
        return levels, maxabs
    qmax = (1 << (bits - 1)) - 1
    scale = maxabs / qmax
    # round half away from zero
    raw = np.copysign(np.floor(np.abs(v / scale) + 0.5), v)
    levels = np.clip(raw, -qmax, qmax).astype(np.int32)
    return levels, scale


def dequantize(levels, scale: float) -> np.ndarray:
    """Inverse map: level * scale elementwise."""
    return np.asarray(levels, dtype=np.float64) * float(scale)


@dataclass
class QuantizedDictionary:
    """Per-atom quantized dictionary; dequantized atom = levels * scale."""

    b_dict: int
    scales: np.ndarray    # (n_a,) float
    levels: np.ndarray    # (n_a, D) int32
    lambda_train: float = 0.0  # metadata carried in the container

    def __post_init__(self):
        _check_bits(self.b_dict)
        # the container stores this metadata as float32
        self.lambda_train = float(np.float32(self.lambda_train))
        self.scales = np.asarray(self.scales, dtype=np.float64)
        self.levels = np.asarray(self.levels, dtype=np.int32)
        if self.levels.ndim != 2 or self.scales.shape != (self.levels.shape[0],):
            raise ValueError("levels must be (n_a, D) with one scale per atom")
        if np.any(self.scales < 0):
            raise ValueError("scales must be non-negative")
        qmax = (1 << (self.b_dict - 1)) - 1 if self.b_dict >= 2 else 1
        if np.any(np.abs(self.levels) > qmax):
            raise ValueError("levels exceed the bit-depth range")

    @property
    def n_a(self) -> int:
        return self.levels.shape[0]

    @property
    def dim(self) -> int:
        return self.levels.shape[1]

    def dequantized_atoms(self) -> np.ndarray:
        return self.levels.astype(np.float64) * self.scales[:, None]


@dataclass
class QuantizedCode:
    """Quantized sparse code; entries with zero level are dropped."""

    n_a: int
    b_coef: int
    scale: float
    indices: np.ndarray  # (k,) int64, strictly increasing
    levels: np.ndarray   # (k,) int32, non-zero

    def __post_init__(self):
        _check_bits(self.b_coef)
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.levels = np.asarray(self.levels, dtype=np.int32)
        if self.indices.shape != self.levels.shape:
            raise ValueError("indices/levels length mismatch")
        if self.scale < 0:
            raise ValueError("scale must be non-negative")
        if self.indices.size:
            if np.any(np.diff(self.indices) <= 0):
                raise ValueError("indices must be strictly increasing")
            if self.indices[0] < 0 or self.indices[-1] >= self.n_a:
                raise ValueError("atom index out of range")
            if np.any(self.levels == 0):
                raise ValueError("zero levels must be dropped")

    @property
    def k(self) -> int:
        return int(self.indices.size)

    def coefficients(self) -> np.ndarray:
        return dequantize(self.levels, self.scale)


def quantize_dictionary(T: Dictionary, b_dict: int,
                        lambda_train: float = 0.0) -> QuantizedDictionary:
    """Quantize every atom with its own max-abs scale."""
    _check_bits(b_dict)
    scales = np.empty(T.n_a)
    levels = np.empty((T.n_a, T.dim), dtype=np.int32)
    for j in range(T.n_a):
        lv, sc = quantize_uniform(T.atoms[j], b_dict)
        if sc == 0.0:
            raise ValueError(f"atom {j} is all-zero")
        levels[j] = lv
        # scales are stored as float32 in the container; rounding here keeps
        # in-memory and on-disk dequantization bit-identical
        scales[j] = float(np.float32(sc))
    return QuantizedDictionary(b_dict, scales, levels, lambda_train)


def quantize_code(c: SparseCode, b_coef: int) -> QuantizedCode:
    """Quantize one item's coefficients; zero-level entries are dropped."""
    _check_bits(b_coef)
    if c.k == 0:
        return QuantizedCode(c.n_a, b_coef, 0.0,
                             np.empty(0, np.int64), np.empty(0, np.int32))
    levels, scale = quantize_uniform(c.coefficients, b_coef)
    keep = levels != 0
    # float32 scale for the same reason as quantize_dictionary
    return QuantizedCode(c.n_a, b_coef, float(np.float32(scale)),
                         c.indices[keep], levels[keep])
