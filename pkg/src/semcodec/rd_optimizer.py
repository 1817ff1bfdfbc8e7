"""Parameter sweeps, rate-fidelity points, and upper convex hull selection.

A sweep learns one dictionary per (n_a, lambda) cell and reuses it across
the (b_dict, b_coef) sub-grid (quantization does not influence learning),
then reports model and measured bits per item for each database size.
"""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from . import bitstream
from .codec import decode_collection, encode_collection, fidelity_report
from .dict_learner import LearnOptions, learn_dictionary
from .embedding_store import EmbeddingCollection
from .errors import CodecError
from .quantizer import quantize_dictionary
from .rate_model import CodecParams, dict_bits_model, rate_per_item_model

PRESETS = {
    "low": CodecParams(n_a=2, lam=1.6, b_dict=2, b_coef=2),
    "medium": CodecParams(n_a=128, lam=0.2, b_dict=4, b_coef=4),
    "high": CodecParams(n_a=128, lam=0.1, b_dict=16, b_coef=16),
}


def preset(name: str) -> CodecParams:
    """Named operating points: low / medium / high."""
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from "
                         f"{sorted(PRESETS)}") from None


@dataclass(frozen=True)
class RatePoint:
    """One (rate, fidelity) evaluation at database size n (inf allowed)."""

    params: CodecParams
    rate_bits_per_item: float
    fidelity: float
    n: float
    kind: str = "measured"  # "measured" | "model"

    def __post_init__(self):
        if self.rate_bits_per_item <= 0:
            raise ValueError("rate must be positive")
        if not -1.0 <= self.fidelity <= 1.0:
            raise ValueError("fidelity must be in [-1, 1]")


@dataclass
class SweepCell:
    """Result of one parameter tuple at one database size."""

    params: CodecParams
    n: float
    model_bits_per_item: Optional[float] = None
    measured_bits_per_item: Optional[float] = None
    fidelity: Optional[float] = None
    error: Optional[str] = None

    def point(self, kind: str = "measured") -> RatePoint:
        if self.error is not None:
            raise CodecError(f"failed cell: {self.error}")
        rate = (self.measured_bits_per_item if kind == "measured"
                else self.model_bits_per_item)
        return RatePoint(self.params, rate, self.fidelity, self.n, kind)


def _worker_count() -> int:
    raw = os.environ.get("SMIC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    if n == 0:
        n = os.cpu_count() or 1
    return max(1, n)


def _eval_dict_cell(Z, n_a, lam, b_grid, sizes, seed, dim):
    """All (b_dict, b_coef) cells sharing one learned dictionary."""
    cells = []
    try:
        T = learn_dictionary(Z, n_a, lam, LearnOptions(seed=seed))
    except Exception as exc:  # failed cells, not aborts
        for b_dict, b_coef in b_grid:
            p = CodecParams(n_a, lam, b_dict, b_coef, dim=dim)
            for n in sizes:
                cells.append(SweepCell(p, n, error=str(exc)))
        return cells
    for b_dict, b_coef in b_grid:
        p = CodecParams(n_a, lam, b_dict, b_coef, dim=dim)
        try:
            qd = quantize_dictionary(T, b_dict, lambda_train=lam)
            codes = encode_collection(Z, qd, lam, b_coef)
            decoded = decode_collection(codes, qd)
            fid = fidelity_report(Z, decoded).mean_cosine
            report = bitstream.write_codes(codes, bitstream.dictionary_id(qd),
                                           io.BytesIO())
            measured_item = report.mean_item_bits
            dict_bits = bitstream.write_dictionary(qd, io.BytesIO())
        except Exception as exc:
            for n in sizes:
                cells.append(SweepCell(p, n, error=str(exc)))
            continue
        model_item = rate_per_item_model(p)
        model_dict = dict_bits_model(p)
        for n in sizes:
            if math.isinf(n):
                model = model_item
                measured = measured_item
            else:
                model = model_item + model_dict / n
                measured = measured_item + dict_bits / n
            cells.append(SweepCell(p, n, model, measured, fid))
    return cells


def sweep(Z: EmbeddingCollection,
          grid_na: Sequence[int], grid_lambda: Sequence[float],
          grid_bdict: Sequence[int], grid_bcoef: Sequence[int],
          sizes: Sequence[float], seed: int = 0) -> list[SweepCell]:
    """Evaluate every parameter tuple; deterministic given seed."""
    if Z.count < 1:
        raise ValueError("empty collection")
    if not (grid_na and grid_lambda and grid_bdict and grid_bcoef and sizes):
        raise ValueError("empty sweep grid")
    b_grid = [(bd, bc) for bd in grid_bdict for bc in grid_bcoef]
    jobs = [(n_a, lam) for n_a in grid_na for lam in grid_lambda]
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda job: _eval_dict_cell(Z, job[0], job[1], b_grid,
                                            sizes, seed, Z.dim), jobs))
    else:
        results = [_eval_dict_cell(Z, n_a, lam, b_grid, sizes, seed, Z.dim)
                   for n_a, lam in jobs]
    return [cell for group in results for cell in group]


def _pareto(points: list[RatePoint]) -> list[RatePoint]:
    """Keep points no other point dominates (<= rate and >= fidelity,
    one strict). Ties on both coordinates keep the first in input order."""
    kept = []
    for i, p in enumerate(points):
        dominated = False
        for j, q in enumerate(points):
            if j == i:
                continue
            if (q.rate_bits_per_item <= p.rate_bits_per_item
                    and q.fidelity >= p.fidelity
                    and (q.rate_bits_per_item < p.rate_bits_per_item
                         or q.fidelity > p.fidelity)):
                dominated = True
                break
            if (j < i and q.rate_bits_per_item == p.rate_bits_per_item
                    and q.fidelity == p.fidelity):
                dominated = True
                break
        if not dominated:
            kept.append(p)
    kept.sort(key=lambda p: p.rate_bits_per_item)
    return kept


def upper_hull(points: list[RatePoint]) -> list[RatePoint]:
    """Upper-left concave frontier of the (rate, fidelity) cloud.

    Pareto filter, then chord pruning: a kept point never lies on or
    below the segment joining its hull neighbours.
    """
    if not points:
        raise ValueError("no points")
    ns = {p.n for p in points}
    if len(ns) > 1:
        raise ValueError("hull requires points of a single database size")
    frontier = _pareto(list(points))
    hull: list[RatePoint] = []
    for p in frontier:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = ((b.rate_bits_per_item - a.rate_bits_per_item)
                     * (p.fidelity - a.fidelity)
                     - (b.fidelity - a.fidelity)
                     * (p.rate_bits_per_item - a.rate_bits_per_item))
            if cross >= 0:  # b on or below chord a->p: not a hull vertex
                hull.pop()
            else:
                break
        hull.append(p)
    return hull
