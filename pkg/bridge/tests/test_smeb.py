import io

import numpy as np
import pytest

from semcodec_bridge import smeb


def test_round_trip_with_names(tmp_path):
    vectors = np.arange(12, dtype=np.float32).reshape(3, 4)
    path = tmp_path / "x.smeb"
    smeb.save(vectors, path, names=["a", "b", "c"])
    got, names = smeb.load(path)
    assert np.array_equal(got, vectors)
    assert names == ["a", "b", "c"]


def test_round_trip_without_names():
    vectors = np.ones((2, 5), dtype=np.float32)
    buf = io.BytesIO()
    smeb.write(vectors, buf)
    buf.seek(0)
    got, names = smeb.read(buf)
    assert np.array_equal(got, vectors)
    assert names is None


def test_minimal_file_is_28_bytes():
    buf = io.BytesIO()
    assert smeb.write(np.zeros((1, 2), dtype=np.float32), buf) == 28


def test_empty_collection_round_trip():
    buf = io.BytesIO()
    smeb.write(np.empty((0, 768), dtype=np.float32), buf, names=[])
    buf.seek(0)
    got, names = smeb.read(buf)
    assert got.shape == (0, 768)
    assert names == []


def test_bad_magic_rejected():
    with pytest.raises(smeb.SmebError, match="magic"):
        smeb.read(io.BytesIO(b"NOPE" + b"\0" * 24))


def test_truncated_rejected():
    buf = io.BytesIO()
    smeb.write(np.ones((2, 3), dtype=np.float32), buf)
    data = buf.getvalue()[:-5]
    with pytest.raises(smeb.SmebError, match="truncated"):
        smeb.read(io.BytesIO(data))


def test_nan_rejected():
    bad = np.full((1, 2), np.nan, dtype=np.float32)
    with pytest.raises(ValueError, match="NaN"):
        smeb.write(bad, io.BytesIO())
