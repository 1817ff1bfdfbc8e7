"""semcodec: multi-item lossy codec for latent embedding collections.

Learns a sparse semantic dictionary over a set of embedding vectors,
encodes each item as quantized sparse coefficients, and decodes by
linear reconstruction plus renormalization, with exact and closed-form
rate accounting.
"""

from .codec import (
    build_side_info,
    decode_collection,
    decode_item,
    encode_collection,
    encode_item,
    fidelity_report,
    project_residual,
)
from .dict_learner import Dictionary, LearnOptions, learn_dictionary, objective
from .embedding_store import EmbeddingCollection, load, read_embeddings, save, write_embeddings
from .kernels import BACKEND as KERNEL_BACKEND
from .quantizer import (
    QuantizedCode,
    QuantizedDictionary,
    dequantize,
    quantize_code,
    quantize_dictionary,
    quantize_uniform,
)
from .rate_model import (
    CodecParams,
    break_even_n,
    compression_ratio,
    p_nonnull_model,
    rate_per_item_model,
    rate_total_model,
)
from .rd_optimizer import RatePoint, preset, sweep, upper_hull
from .semantic_ops import combine, cosine, renormalize
from .sparse_coder import SolverOptions, SparseCode, kkt_violation, lambda_max, lasso_cd

__version__ = "0.1.0"
