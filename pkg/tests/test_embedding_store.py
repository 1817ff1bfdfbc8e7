import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semcodec import EmbeddingCollection, read_embeddings, write_embeddings
from semcodec.embedding_store import file_size
from semcodec.errors import FormatError


def roundtrip(c: EmbeddingCollection) -> EmbeddingCollection:
    buf = io.BytesIO()
    write_embeddings(c, buf)
    buf.seek(0)
    return read_embeddings(buf)


def test_minimal_collection_byte_count():
    c = EmbeddingCollection(np.array([[1.0, 2.0]], dtype=np.float32))
    buf = io.BytesIO()
    written = write_embeddings(c, buf)
    # 4 magic + 2 version + 2 flags + 4 dim + 8 count + 1*2*4 data
    assert written == 28
    assert written == len(buf.getvalue()) == file_size(2, 1)


def test_roundtrip_bit_exact():
    rng = np.random.default_rng(0)
    c = EmbeddingCollection(rng.standard_normal((5, 7)).astype(np.float32),
                            names=["a", "b", "", "日本語", "e"])
    back = roundtrip(c)
    assert np.array_equal(back.vectors, c.vectors)
    assert back.names == c.names


def test_empty_collection():
    c = EmbeddingCollection(np.empty((0, 4), dtype=np.float32))
    back = roundtrip(c)
    assert back.count == 0 and back.dim == 4


def test_nan_rejected():
    with pytest.raises(ValueError):
        EmbeddingCollection(np.array([[np.nan, 0.0]], dtype=np.float32))


def test_bad_magic():
    with pytest.raises(FormatError, match="magic"):
        read_embeddings(io.BytesIO(b"XXXX" + b"\x00" * 30))


def test_truncated_payload():
    c = EmbeddingCollection(np.ones((10, 3), dtype=np.float32))
    buf = io.BytesIO()
    write_embeddings(c, buf)
    data = buf.getvalue()[:-12]  # drop one vector
    with pytest.raises(FormatError, match="truncated"):
        read_embeddings(io.BytesIO(data))


def test_zero_dim_rejected():
    import struct
    raw = struct.pack("<4sHHIQ", b"SMEB", 1, 0, 0, 0)
    with pytest.raises(FormatError):
        read_embeddings(io.BytesIO(raw))


def test_names_length_mismatch():
    with pytest.raises(ValueError):
        EmbeddingCollection(np.ones((2, 2), dtype=np.float32), names=["x"])


@settings(max_examples=50, deadline=None)
@given(n=st.integers(0, 8), d=st.integers(1, 12),
       with_names=st.booleans(), seed=st.integers(0, 2**32 - 1))
def test_roundtrip_property(n, d, with_names, seed):
    rng = np.random.default_rng(seed)
    names = [f"item-{i}" for i in range(n)] if with_names else None
    c = EmbeddingCollection(rng.standard_normal((n, d)).astype(np.float32),
                            names=names)
    buf = io.BytesIO()
    written = write_embeddings(c, buf)
    assert written == file_size(d, n, names)
    buf.seek(0)
    back = read_embeddings(buf)
    assert np.array_equal(back.vectors, c.vectors)
    assert back.names == c.names
