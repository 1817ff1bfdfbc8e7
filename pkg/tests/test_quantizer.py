import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semcodec import (
    Dictionary,
    SparseCode,
    dequantize,
    quantize_code,
    quantize_dictionary,
    quantize_uniform,
)


def test_two_bit_example():
    levels, scale = quantize_uniform([-1.0, 0.5, 1.0], 2)
    assert scale == 1.0
    assert list(levels) == [-1, 1, 1]
    assert np.array_equal(dequantize(levels, scale), [-1.0, 1.0, 1.0])


def test_all_zero_input():
    levels, scale = quantize_uniform([0.0, 0.0], 8)
    assert scale == 0.0
    assert np.all(levels == 0)
    assert np.array_equal(dequantize(levels, scale), [0.0, 0.0])


def test_one_bit_signs():
    levels, scale = quantize_uniform([-3.0, 0.0, 2.0], 1)
    assert scale == 3.0
    assert list(levels) == [-1, 1, 1]  # zero maps to +1


def test_sixteen_bit_bound():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(768)
    levels, scale = quantize_uniform(v, 16)
    err = np.abs(v - dequantize(levels, scale))
    assert np.all(err <= np.max(np.abs(v)) / (2 * (2**15 - 1)) + 1e-15)


def test_sixteen_bit_unit_vector_cosine():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(768)
    v /= np.linalg.norm(v)
    levels, scale = quantize_uniform(v, 16)
    vq = dequantize(levels, scale)
    cos = v @ vq / (np.linalg.norm(v) * np.linalg.norm(vq))
    assert cos >= 0.9999


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), bits=st.sampled_from([2, 4, 8, 16]),
       n=st.integers(1, 50))
def test_half_step_bound_property(seed, bits, n):
    rng = np.random.default_rng(seed)
    v = rng.uniform(-100, 100, size=n)
    levels, scale = quantize_uniform(v, bits)
    if scale == 0.0:
        return
    assert np.all(np.abs(v - dequantize(levels, scale)) <= scale / 2 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), bits=st.sampled_from([2, 4, 8, 16]))
def test_idempotent_on_own_output(seed, bits):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(20)
    levels, scale = quantize_uniform(v, bits)
    levels2, _ = quantize_uniform(dequantize(levels, scale), bits)
    assert np.array_equal(levels, levels2)


def test_quantize_dictionary_16bit_close():
    rng = np.random.default_rng(3)
    atoms = rng.standard_normal((4, 768))
    atoms /= np.linalg.norm(atoms, axis=1)[:, None]
    qd = quantize_dictionary(Dictionary(atoms), 16)
    err = np.linalg.norm(qd.dequantized_atoms() - atoms, axis=1)
    assert np.all(err <= 1e-4)


def test_quantize_code_drops_zero_levels():
    c = SparseCode(8, [3, 7], [0.05, 2.0])
    qc = quantize_code(c, 2)
    assert qc.scale == pytest.approx(2.0)
    assert list(qc.indices) == [7]
    assert list(qc.levels) == [1]
    # dropping the zero-level entry does not change the reconstruction
    assert np.allclose(qc.coefficients(), [2.0])


def test_quantize_empty_code():
    qc = quantize_code(SparseCode(8, [], []), 4)
    assert qc.k == 0 and qc.scale == 0.0


def test_all_zero_atom_rejected():
    atoms = np.array([[1.0, 0.0], [0.0, 1.0]])
    d = Dictionary(atoms)
    d.atoms[1] = 0.0  # corrupt after validation
    with pytest.raises(ValueError, match="all-zero"):
        quantize_dictionary(d, 8)
