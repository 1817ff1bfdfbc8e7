"""Bit-exact containers for quantized dictionaries and per-item codes.

SMDC (dictionary):
    "SMDC" | version u16 = 1 | D u32 | n_a u32 | b_dict u8
    | lambda_train f32 | scales n_a x f32
    | levels bit-packed (n_a * D * b_dict bits, atom-major, byte-padded)

SMCD (codes, random access):
    "SMCD" | version u16 = 1 | dict_id u64 | n_a u32 | b_coef u8 | N u64
    | offset table N x u64 (absolute byte offsets into the container)
    | per item: scale f32 | k u16 | k x (index, level) bit-packed,
      byte-padded per item

Within an item, entries are packed most-significant-bit first into the
byte stream. Indices are unsigned in ceil(log2 n_a) bits; levels are
two's complement in b bits (b == 1: a single sign bit, 1 = +1, 0 = -1).
Integers little-endian throughout.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import BinaryIO, Optional

import numpy as np

from .errors import DictionaryMismatchError, FormatError
from .quantizer import QuantizedCode, QuantizedDictionary

DICT_MAGIC = b"SMDC"
CODE_MAGIC = b"SMCD"
VERSION = 1

_DICT_HEADER = struct.Struct("<4sHIIBf")
_CODE_HEADER = struct.Struct("<4sHQIBQ")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


class BitWriter:
    """Packs unsigned fields MSB-first into a growing byte buffer."""

    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, value: int, nbits: int) -> None:
        if nbits == 0:
            return
        if value < 0 or value >= (1 << nbits):
            raise ValueError(f"value {value} does not fit in {nbits} bits")
        self._acc = (self._acc << nbits) | value
        self._nbits += nbits
        while self._nbits >= 8:
            self._nbits -= 8
            self._buf.append((self._acc >> self._nbits) & 0xFF)
        self._acc &= (1 << self._nbits) - 1

    def getvalue(self) -> bytes:
        """Flush to a byte boundary (zero padding) and return the bytes."""
        if self._nbits:
            self._buf.append((self._acc << (8 - self._nbits)) & 0xFF)
            self._acc = 0
            self._nbits = 0
        return bytes(self._buf)


class BitReader:
    """MSB-first counterpart of BitWriter."""

    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0  # bit position

    def read(self, nbits: int) -> int:
        if nbits == 0:
            return 0
        end = self._pos + nbits
        if end > len(self._data) * 8:
            raise FormatError("bit stream exhausted")
        value = 0
        pos = self._pos
        while pos < end:
            byte = self._data[pos >> 3]
            offset = pos & 7
            take = min(8 - offset, end - pos)
            chunk = (byte >> (8 - offset - take)) & ((1 << take) - 1)
            value = (value << take) | chunk
            pos += take
        self._pos = end
        return value


def _signed_to_field(level: int, bits: int) -> int:
    if bits == 1:
        if level == 0:
            raise ValueError("zero level cannot be stored at 1 bit")
        return 1 if level > 0 else 0
    return level & ((1 << bits) - 1)


def _field_to_signed(value: int, bits: int) -> int:
    if bits == 1:
        return 1 if value else -1
    if value >= 1 << (bits - 1):
        value -= 1 << bits
    return value


def index_bits(n_a: int) -> int:
    if n_a < 1:
        raise ValueError("n_a must be >= 1")
    return math.ceil(math.log2(n_a)) if n_a > 1 else 0


# --- dictionary container -------------------------------------------------

def dictionary_bytes(qd: QuantizedDictionary) -> bytes:
    header = _DICT_HEADER.pack(DICT_MAGIC, VERSION, qd.dim, qd.n_a,
                               qd.b_dict, qd.lambda_train)
    scales = np.asarray(qd.scales, dtype="<f4").tobytes()
    bw = BitWriter()
    for j in range(qd.n_a):
        for value in qd.levels[j]:
            bw.write(_signed_to_field(int(value), qd.b_dict), qd.b_dict)
    return header + scales + bw.getvalue()


def dictionary_size_bytes(n_a: int, dim: int, b_dict: int) -> int:
    """Exact SMDC byte size for the given shape."""
    return _DICT_HEADER.size + 4 * n_a + math.ceil(n_a * dim * b_dict / 8)


def write_dictionary(qd: QuantizedDictionary, sink: BinaryIO) -> int:
    """Serialize the dictionary; returns the total bit count written."""
    data = dictionary_bytes(qd)
    sink.write(data)
    return len(data) * 8


def _read_exact(source: BinaryIO, n: int, what: str) -> bytes:
    buf = source.read(n)
    if len(buf) != n:
        raise FormatError(f"truncated {what}: wanted {n} bytes, got {len(buf)}")
    return buf


def read_dictionary(source: BinaryIO) -> QuantizedDictionary:
    magic, version, dim, n_a, b_dict, lambda_train = _DICT_HEADER.unpack(
        _read_exact(source, _DICT_HEADER.size, "SMDC header"))
    if magic != DICT_MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {DICT_MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported SMDC version {version}")
    if not 1 <= b_dict <= 16:
        raise FormatError(f"b_dict {b_dict} out of range")
    if dim == 0 or n_a == 0:
        raise FormatError("empty dictionary shape")
    scales = np.frombuffer(_read_exact(source, 4 * n_a, "SMDC scales"),
                           dtype="<f4").astype(np.float64)
    payload = _read_exact(source, math.ceil(n_a * dim * b_dict / 8),
                          "SMDC levels")
    br = BitReader(payload)
    levels = np.empty((n_a, dim), dtype=np.int32)
    for j in range(n_a):
        for d in range(dim):
            levels[j, d] = _field_to_signed(br.read(b_dict), b_dict)
    return QuantizedDictionary(b_dict, scales, levels, float(lambda_train))


def dictionary_id(qd: QuantizedDictionary) -> int:
    """64-bit FNV-1a of the serialized container; detects mismatched decode."""
    return fnv1a64(dictionary_bytes(qd))


# --- codes container ------------------------------------------------------

@dataclass
class RateReport:
    """Exact measured rates of one codes container.

    per_item_bits counts scale + count + packed entries before byte
    padding; the offset table (8 bytes/item) is part of container_bytes
    but reported separately so model comparisons can exclude it.
    """

    per_item_bits: list[int]
    container_bytes: int
    offset_table_bytes: int
    dict_bits: Optional[int] = None
    dict_container_bytes: Optional[int] = None
    model_bits_per_item: Optional[float] = None

    @property
    def payload_bits(self) -> int:
        return sum(self.per_item_bits)

    @property
    def mean_item_bits(self) -> float:
        if not self.per_item_bits:
            return 0.0
        return self.payload_bits / len(self.per_item_bits)


def item_payload_bits(k: int, n_a: int, b_coef: int) -> int:
    """Exact per-item bits before byte padding: scale + count + entries."""
    return 32 + 16 + k * (index_bits(n_a) + b_coef)


def codes_size_bytes(ks: list[int], n_a: int, b_coef: int) -> int:
    """Exact SMCD byte size given the per-item support sizes."""
    return (_CODE_HEADER.size + 8 * len(ks)
            + sum(math.ceil(item_payload_bits(k, n_a, b_coef) / 8) for k in ks))


def _item_bytes(code: QuantizedCode) -> bytes:
    head = struct.pack("<fH", code.scale, code.k)
    bw = BitWriter()
    ib = index_bits(code.n_a)
    for idx, level in zip(code.indices, code.levels):
        bw.write(int(idx), ib)
        bw.write(_signed_to_field(int(level), code.b_coef), code.b_coef)
    return head + bw.getvalue()


def write_codes(codes: list[QuantizedCode], dict_id: int,
                sink: BinaryIO) -> RateReport:
    """Serialize all codes with an offset table for O(1) random access."""
    if not codes:
        raise ValueError("no codes to write")
    n_a = codes[0].n_a
    b_coef = codes[0].b_coef
    for c in codes:
        if c.n_a != n_a or c.b_coef != b_coef:
            raise ValueError("codes must share n_a and b_coef")
    n = len(codes)
    header = _CODE_HEADER.pack(CODE_MAGIC, VERSION, dict_id, n_a, b_coef, n)
    items = [_item_bytes(c) for c in codes]
    offsets = []
    pos = len(header) + 8 * n
    for item in items:
        offsets.append(pos)
        pos += len(item)
    sink.write(header)
    sink.write(struct.pack(f"<{n}Q", *offsets))
    for item in items:
        sink.write(item)
    return RateReport(
        per_item_bits=[item_payload_bits(c.k, n_a, b_coef) for c in codes],
        container_bytes=pos,
        offset_table_bytes=8 * n,
    )


def _read_code_header(source: BinaryIO):
    magic, version, dict_id, n_a, b_coef, n = _CODE_HEADER.unpack(
        _read_exact(source, _CODE_HEADER.size, "SMCD header"))
    if magic != CODE_MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {CODE_MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported SMCD version {version}")
    if not 1 <= b_coef <= 16:
        raise FormatError(f"b_coef {b_coef} out of range")
    return dict_id, n_a, b_coef, n


def _check_dict_id(found: int, expected: Optional[int]) -> None:
    if expected is not None and found != expected:
        raise DictionaryMismatchError(
            f"dictionary mismatch: container built against id {found:#x}, "
            f"expected {expected:#x}")


def _read_item(source: BinaryIO, n_a: int, b_coef: int) -> QuantizedCode:
    scale, k = struct.unpack("<fH", _read_exact(source, 6, "SMCD item header"))
    ib = index_bits(n_a)
    payload = _read_exact(source, math.ceil(k * (ib + b_coef) / 8),
                          "SMCD item payload")
    br = BitReader(payload)
    indices = np.empty(k, dtype=np.int64)
    levels = np.empty(k, dtype=np.int32)
    for i in range(k):
        indices[i] = br.read(ib)
        levels[i] = _field_to_signed(br.read(b_coef), b_coef)
    return QuantizedCode(n_a, b_coef, float(scale), indices, levels)


def read_code(source: BinaryIO, item_index: int,
              expected_dict_id: Optional[int] = None) -> QuantizedCode:
    """Random-access read of one item from a seekable SMCD source."""
    base = source.tell()
    dict_id, n_a, b_coef, n = _read_code_header(source)
    _check_dict_id(dict_id, expected_dict_id)
    if not 0 <= item_index < n:
        raise IndexError(f"item index {item_index} out of range [0, {n})")
    source.seek(base + _CODE_HEADER.size + 8 * item_index)
    (offset,) = struct.unpack("<Q", _read_exact(source, 8, "SMCD offset"))
    source.seek(base + offset)
    return _read_item(source, n_a, b_coef)


def read_codes(source: BinaryIO,
               expected_dict_id: Optional[int] = None) -> list[QuantizedCode]:
    """Sequential read of every item."""
    dict_id, n_a, b_coef, n = _read_code_header(source)
    _check_dict_id(dict_id, expected_dict_id)
    _read_exact(source, 8 * n, "SMCD offset table")
    return [_read_item(source, n_a, b_coef) for _ in range(n)]


def read_codes_dict_id(source: BinaryIO) -> int:
    """Peek the dictionary id a codes container was built against."""
    pos = source.tell()
    dict_id, _, _, _ = _read_code_header(source)
    source.seek(pos)
    return dict_id
