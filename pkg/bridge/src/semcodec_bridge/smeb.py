"""Minimal reader/writer for the SMEB embedding container.

The bridge talks to the codec only through this file format, so it carries
its own implementation of the layout:

    magic "SMEB" | version u16 = 1 | flags u16 (bit0 = names present)
    | dim u32 | count u64
    | if names: count x (len u16, UTF-8 bytes)
    | data: count x dim float32, item-major

All integers are little-endian.
"""

from __future__ import annotations

import struct
from typing import BinaryIO, Optional

import numpy as np

MAGIC = b"SMEB"
VERSION = 1
_HEADER = struct.Struct("<4sHHIQ")


class SmebError(ValueError):
    """Malformed or truncated SMEB data."""


def write(vectors: np.ndarray, sink: BinaryIO,
          names: Optional[list[str]] = None) -> int:
    """Write an (N, D) float array as SMEB; returns bytes written."""
    data = np.ascontiguousarray(vectors, dtype="<f4")
    if data.ndim != 2 or data.shape[1] < 1:
        raise ValueError("vectors must be a (N, D) array with D >= 1")
    if not np.all(np.isfinite(data)):
        raise ValueError("embedding data contains NaN/Inf")
    if names is not None and len(names) != len(data):
        raise ValueError("names length must match vector count")
    flags = 1 if names is not None else 0
    written = sink.write(_HEADER.pack(MAGIC, VERSION, flags,
                                      data.shape[1], data.shape[0]))
    if names is not None:
        for name in names:
            raw = name.encode("utf-8")
            if len(raw) > 0xFFFF:
                raise ValueError(f"name too long: {len(raw)} bytes")
            written += sink.write(struct.pack("<H", len(raw)))
            written += sink.write(raw)
    written += sink.write(data.tobytes())
    return written


def _read_exact(source: BinaryIO, n: int) -> bytes:
    buf = source.read(n)
    if len(buf) != n:
        raise SmebError(f"truncated SMEB: wanted {n} bytes, got {len(buf)}")
    return buf


def read(source: BinaryIO) -> tuple[np.ndarray, Optional[list[str]]]:
    """Read an SMEB stream; returns (vectors float32 (N, D), names or None)."""
    magic, version, flags, dim, count = _HEADER.unpack(
        _read_exact(source, _HEADER.size))
    if magic != MAGIC:
        raise SmebError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise SmebError(f"unsupported SMEB version {version}")
    if dim == 0:
        raise SmebError("dimension 0 is invalid")
    names = None
    if flags & 1:
        names = []
        for _ in range(count):
            (length,) = struct.unpack("<H", _read_exact(source, 2))
            names.append(_read_exact(source, length).decode("utf-8"))
    raw = _read_exact(source, count * dim * 4)
    vectors = np.frombuffer(raw, dtype="<f4").reshape(count, dim).copy()
    return vectors, names


def save(vectors: np.ndarray, path, names: Optional[list[str]] = None) -> int:
    with open(path, "wb") as f:
        return write(vectors, f, names)


def load(path) -> tuple[np.ndarray, Optional[list[str]]]:
    with open(path, "rb") as f:
        return read(f)
