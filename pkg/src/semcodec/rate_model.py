"""Closed-form rate accounting and break-even analysis.

Models the shared-dictionary scheme's total rate as
    dict: n_a * D * b_dict bits, paid once per collection
    item: log2(n_a) * b_coef * p_nonnull bits on average,
with p_nonnull = (lambda + 1)^(-log2(n_a)) the modeled fraction of
non-null coefficients. These figures deliberately omit index bits and
per-item overhead; reports always show them next to measured rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoBreakEvenError

DEFAULT_DIM = 768
DEFAULT_IMAGE_PIXELS = 768 * 768
DEFAULT_SIC_BPP = 1.2e-3


@dataclass(frozen=True)
class CodecParams:
    """The four codec knobs plus conversion constants."""

    n_a: int
    lam: float
    b_dict: int
    b_coef: int
    dim: int = DEFAULT_DIM
    image_pixels: int = DEFAULT_IMAGE_PIXELS

    def __post_init__(self):
        if self.n_a < 2:
            raise ValueError("n_a must be >= 2")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")
        if min(self.b_dict, self.b_coef, self.dim, self.image_pixels) < 1:
            raise ValueError("bit depths, dim and image_pixels must be positive")


def p_nonnull_model(lam: float, n_a: int) -> float:
    """Modeled fraction of non-null coefficients: (lam+1)^(-log2 n_a)."""
    if lam < 0:
        raise ValueError("lam must be non-negative")
    if n_a < 2:
        raise ValueError("n_a must be >= 2")
    return (lam + 1.0) ** (-math.log2(n_a))


def dict_bits_model(p: CodecParams) -> float:
    """Side-information cost of the quantized dictionary."""
    return p.n_a * p.dim * p.b_dict


def rate_per_item_model(p: CodecParams) -> float:
    """Expected bits per item: log2(n_a) * b_coef * p_nonnull."""
    return math.log2(p.n_a) * p.b_coef * p_nonnull_model(p.lam, p.n_a)


def rate_total_model(p: CodecParams, n: int) -> float:
    """Dictionary plus n items, in bits."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return dict_bits_model(p) + n * rate_per_item_model(p)


def bpp_per_image(p: CodecParams, n: int) -> float:
    """Amortized bits per pixel per image for a collection of n items."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return rate_total_model(p, n) / n / p.image_pixels


def sic_bits_per_item(sic_bpp: float = DEFAULT_SIC_BPP,
                      image_pixels: int = DEFAULT_IMAGE_PIXELS) -> float:
    """Per-item bits of a single-item baseline quoted in bits per pixel."""
    return sic_bpp * image_pixels


def break_even_n(dict_bits: float, sic_bits: float, smic_bits: float) -> int:
    """Smallest collection size where shared-dictionary coding wins.

    Smallest integer strictly greater than dict_bits / (sic - smic).
    """
    if sic_bits <= smic_bits:
        raise NoBreakEvenError(
            "per-item rate does not beat the baseline; no finite break-even")
    ratio = dict_bits / (sic_bits - smic_bits)
    return math.floor(ratio) + 1


def compression_ratio(sic_bits: float, p: CodecParams,
                      n: float = math.inf) -> float:
    """Baseline-to-ours total-rate ratio for n items (inf drops the dict)."""
    r_item = rate_per_item_model(p)
    if math.isinf(n):
        return sic_bits / r_item
    if n < 1:
        raise ValueError("n must be >= 1 or infinity")
    return n * sic_bits / (dict_bits_model(p) + n * r_item)
