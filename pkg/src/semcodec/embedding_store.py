"""Embedding collection type and its SMEB binary container.

SMEB layout (all integers little-endian):

    magic "SMEB" | version u16 = 1 | flags u16 (bit0 = names present)
    | dim u32 | count u64
    | if names: count x (len u16, UTF-8 bytes)
    | data: count x dim float32, item-major
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import BinaryIO, Optional, Sequence

import numpy as np

from .errors import FormatError

MAGIC = b"SMEB"
VERSION = 1
_HEADER = struct.Struct("<4sHHIQ")


def as_latent(values, dim: Optional[int] = None) -> np.ndarray:
    """Validate and return a latent vector as a float64 1-D array."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("latent vector must be 1-D and non-empty")
    if not np.all(np.isfinite(v)):
        raise ValueError("latent vector contains NaN/Inf")
    if dim is not None and v.size != dim:
        raise ValueError(f"expected dimension {dim}, got {v.size}")
    return v


@dataclass
class EmbeddingCollection:
    """N latent vectors of common dimension, stored item-major as float32."""

    vectors: np.ndarray  # (N, D) float32
    names: Optional[list[str]] = None

    def __post_init__(self):
        self.vectors = np.ascontiguousarray(self.vectors, dtype=np.float32)
        if self.vectors.ndim != 2:
            raise ValueError("vectors must be a (N, D) array")
        if self.vectors.shape[1] < 1:
            raise ValueError("dimension must be >= 1")
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("embedding data contains NaN/Inf")
        if self.names is not None and len(self.names) != len(self.vectors):
            raise ValueError("names length must match vector count")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.count

    def item(self, i: int) -> np.ndarray:
        return np.asarray(self.vectors[i], dtype=np.float64)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[float]],
                     names: Optional[list[str]] = None) -> "EmbeddingCollection":
        return cls(np.asarray(vectors, dtype=np.float32), names)


def file_size(dim: int, count: int, names: Optional[Sequence[str]] = None) -> int:
    """Exact SMEB byte size for the given shape and names."""
    size = _HEADER.size + count * dim * 4
    if names is not None:
        size += sum(2 + len(n.encode("utf-8")) for n in names)
    return size


def write_embeddings(collection: EmbeddingCollection, sink: BinaryIO) -> int:
    """Serialize a collection as SMEB; returns the byte count written."""
    flags = 1 if collection.names is not None else 0
    written = sink.write(_HEADER.pack(MAGIC, VERSION, flags,
                                      collection.dim, collection.count))
    if collection.names is not None:
        for name in collection.names:
            raw = name.encode("utf-8")
            if len(raw) > 0xFFFF:
                raise ValueError(f"name too long: {len(raw)} bytes")
            written += sink.write(struct.pack("<H", len(raw)))
            written += sink.write(raw)
    data = np.ascontiguousarray(collection.vectors, dtype="<f4")
    written += sink.write(data.tobytes())
    return written


def _read_exact(source: BinaryIO, n: int) -> bytes:
    buf = source.read(n)
    if len(buf) != n:
        raise FormatError(f"truncated SMEB: wanted {n} bytes, got {len(buf)}")
    return buf


def read_embeddings(source: BinaryIO) -> EmbeddingCollection:
    """Parse an SMEB stream back into a collection."""
    magic, version, flags, dim, count = _HEADER.unpack(_read_exact(source, _HEADER.size))
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported SMEB version {version}")
    if dim == 0:
        raise FormatError("dimension 0 is invalid")
    names = None
    if flags & 1:
        names = []
        for _ in range(count):
            (length,) = struct.unpack("<H", _read_exact(source, 2))
            names.append(_read_exact(source, length).decode("utf-8"))
    raw = _read_exact(source, count * dim * 4)
    vectors = np.frombuffer(raw, dtype="<f4").reshape(count, dim)
    return EmbeddingCollection(vectors.copy(), names)


def save(collection: EmbeddingCollection, path) -> int:
    with open(path, "wb") as f:
        return write_embeddings(collection, f)


def load(path) -> EmbeddingCollection:
    with open(path, "rb") as f:
        return read_embeddings(f)
