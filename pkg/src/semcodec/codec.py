"""End-to-end pipeline: learn + quantize the dictionary once, then encode
and decode items independently against it.

Encoding solves the L1 projection against the *dequantized* quantized
atoms, never the float atoms: the decoder only ever sees the quantized
dictionary, so both sides must agree on it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dict_learner import LearnOptions, learn_dictionary
from .embedding_store import EmbeddingCollection, as_latent
from .errors import DegenerateVectorError, DimensionMismatchError, NullCodeError
from .quantizer import QuantizedCode, QuantizedDictionary, quantize_code, quantize_dictionary
from .rate_model import CodecParams
from .semantic_ops import DEFAULT_TARGET_NORM, cosine, renormalize
from .sparse_coder import SolverOptions, lasso_cd


def build_side_info(Z: EmbeddingCollection, p: CodecParams,
                    seed: int = 0,
                    learn_opts: LearnOptions | None = None) -> QuantizedDictionary:
    """Learn the dictionary on the collection, then quantize it."""
    opts = learn_opts or LearnOptions(seed=seed)
    T = learn_dictionary(Z, p.n_a, p.lam, opts)
    return quantize_dictionary(T, p.b_dict, lambda_train=p.lam)


def encode_item(z, qd: QuantizedDictionary, lam: float, b_coef: int,
                solver_opts: SolverOptions | None = None) -> QuantizedCode:
    """Project one latent on the quantized atoms and quantize the result."""
    z = as_latent(z)
    if z.size != qd.dim:
        raise DimensionMismatchError(f"latent dim {z.size} != dictionary dim {qd.dim}")
    code = lasso_cd(z, qd.dequantized_atoms(), lam, solver_opts)
    return quantize_code(code, b_coef)


def decode_item(code: QuantizedCode, qd: QuantizedDictionary,
                target_norm: float = DEFAULT_TARGET_NORM) -> np.ndarray:
    """Linear reconstruction from quantized coefficients, renormalized."""
    if code.n_a != qd.n_a:
        raise DimensionMismatchError(
            f"code references {code.n_a} atoms, dictionary has {qd.n_a}")
    if code.k == 0:
        raise NullCodeError("empty code decodes to the zero vector; "
                            "the item was over-sparsified")
    atoms = qd.dequantized_atoms()
    z_hat = code.coefficients() @ atoms[code.indices]
    return renormalize(z_hat, target_norm)


def encode_collection(Z: EmbeddingCollection, qd: QuantizedDictionary,
                      lam: float, b_coef: int,
                      solver_opts: SolverOptions | None = None) -> list[QuantizedCode]:
    return [encode_item(Z.item(i), qd, lam, b_coef, solver_opts)
            for i in range(Z.count)]


def decode_collection(codes: list[QuantizedCode], qd: QuantizedDictionary,
                      target_norm: float = DEFAULT_TARGET_NORM) -> EmbeddingCollection:
    decoded = np.stack([decode_item(c, qd, target_norm) for c in codes])
    return EmbeddingCollection(decoded.astype(np.float32))


def project_residual(z, qd: QuantizedDictionary, lam: float,
                     target_norm: float = DEFAULT_TARGET_NORM):
    """Split a latent into its in-dictionary projection and the residual.

    Analysis path: float coefficients, no coefficient quantization. Both
    parts renormalized; degenerate parts (item in or orthogonal to the
    dictionary span at this penalty) raise.
    """
    z = as_latent(z)
    if z.size != qd.dim:
        raise DimensionMismatchError(f"latent dim {z.size} != dictionary dim {qd.dim}")
    atoms = qd.dequantized_atoms()
    code = lasso_cd(z, atoms, lam)
    z_hat = atoms.T @ code.dense()
    resid = z - z_hat
    try:
        projection = renormalize(z_hat, target_norm)
    except DegenerateVectorError as exc:
        raise DegenerateVectorError(
            "degenerate projection: latent orthogonal to the dictionary "
            "span at this penalty") from exc
    try:
        residual = renormalize(resid, target_norm)
    except DegenerateVectorError as exc:
        raise DegenerateVectorError(
            "degenerate residual: latent lies in the dictionary span") from exc
    return projection, residual


@dataclass
class FidelityReport:
    """Latent-space fidelity aggregates between a collection and its decode."""

    mean_cosine: float
    min_cosine: float
    mean_mse: float   # after renormalizing both sides to target_norm
    count: int
    target_norm: float = DEFAULT_TARGET_NORM


def fidelity_report(Z: EmbeddingCollection, Zhat: EmbeddingCollection,
                    target_norm: float = DEFAULT_TARGET_NORM) -> FidelityReport:
    """Mean/min cosine and normalized latent MSE, item by item."""
    if Z.count != Zhat.count or Z.dim != Zhat.dim:
        raise DimensionMismatchError("collections differ in shape")
    cosines = np.empty(Z.count)
    mses = np.empty(Z.count)
    for i in range(Z.count):
        a = Z.item(i)
        b = Zhat.item(i)
        cosines[i] = cosine(a, b)
        diff = renormalize(a, target_norm) - renormalize(b, target_norm)
        mses[i] = float(diff @ diff) / Z.dim
    return FidelityReport(float(cosines.mean()), float(cosines.min()),
                          float(mses.mean()), Z.count, target_norm)


def measured_nonnull_fraction(codes: list[QuantizedCode]) -> float:
    """Mean fraction of non-null coefficients across items."""
    if not codes:
        raise ValueError("no codes")
    return float(np.mean([c.k / c.n_a for c in codes]))
