import math

import numpy as np
import pytest

from semcodec import CodecParams, RatePoint, preset, sweep, upper_hull
from semcodec.codec import build_side_info, decode_collection, encode_collection, fidelity_report

from conftest import planted_collection

P = CodecParams(8, 0.1, 8, 8, dim=32)


def pt(rate, fid, n=math.inf):
    return RatePoint(P, rate, fid, n)


def oracle_hull(points):
    """Brute-force Pareto filter followed by chord-based concavity pruning."""
    kept = []
    for i, p in enumerate(points):
        dominated = any(
            (q.rate_bits_per_item <= p.rate_bits_per_item
             and q.fidelity >= p.fidelity
             and (q.rate_bits_per_item < p.rate_bits_per_item
                  or q.fidelity > p.fidelity))
            or (j < i and q.rate_bits_per_item == p.rate_bits_per_item
                and q.fidelity == p.fidelity)
            for j, q in enumerate(points) if j != i)
        if not dominated:
            kept.append(p)
    kept.sort(key=lambda p: p.rate_bits_per_item)
    changed = True
    while changed:
        changed = False
        for m in range(1, len(kept) - 1):
            a, b, c = kept[m - 1], kept[m], kept[m + 1]
            t = ((b.rate_bits_per_item - a.rate_bits_per_item)
                 / (c.rate_bits_per_item - a.rate_bits_per_item))
            chord = a.fidelity + t * (c.fidelity - a.fidelity)
            if b.fidelity <= chord:
                kept.pop(m)
                changed = True
                break
    return kept


def test_dominated_point_removed():
    points = [pt(1, 0.5), pt(2, 0.9), pt(3, 0.8)]
    hull = upper_hull(points)
    assert [(p.rate_bits_per_item, p.fidelity) for p in hull] == [(1, 0.5), (2, 0.9)]


def test_chord_pruning():
    points = [pt(1, 0.1), pt(2, 0.2), pt(3, 0.9)]
    hull = upper_hull(points)
    assert [(p.rate_bits_per_item, p.fidelity) for p in hull] == [(1, 0.1), (3, 0.9)]


def test_singleton():
    points = [pt(5, 0.5)]
    assert upper_hull(points) == points


def test_rate_ties_keep_higher_fidelity():
    hull = upper_hull([pt(1, 0.3), pt(1, 0.6)])
    assert [(p.rate_bits_per_item, p.fidelity) for p in hull] == [(1, 0.6)]


def test_hull_matches_oracle_and_permutation_invariant():
    rng = np.random.default_rng(42)
    for trial in range(100):
        n = int(rng.integers(1, 201))
        points = [pt(float(r), float(f))
                  for r, f in zip(rng.uniform(1, 100, n), rng.uniform(-1, 1, n))]
        expected = oracle_hull(points)
        got = upper_hull(points)
        assert got == expected, f"trial {trial}"
        perm = [points[i] for i in rng.permutation(n)]
        assert set(id(p) for p in upper_hull(perm)) >= set()
        assert sorted((p.rate_bits_per_item, p.fidelity) for p in upper_hull(perm)) \
            == sorted((p.rate_bits_per_item, p.fidelity) for p in expected)


def test_hull_invariant_under_monotone_rate_rescaling():
    rng = np.random.default_rng(7)
    points = [pt(float(r), float(f))
              for r, f in zip(rng.uniform(1, 100, 50), rng.uniform(0, 1, 50))]
    base = {(p.rate_bits_per_item, p.fidelity) for p in upper_hull(points)}
    # strictly increasing concavity-preserving rescale keeps membership
    scaled = [pt(3.0 * p.rate_bits_per_item + 1.0, p.fidelity) for p in points]
    rescaled = {((p.rate_bits_per_item - 1.0) / 3.0, p.fidelity)
                for p in upper_hull(scaled)}
    assert {(round(r, 9), f) for r, f in rescaled} == \
        {(round(r, 9), f) for r, f in base}


def test_mixed_sizes_rejected():
    with pytest.raises(ValueError):
        upper_hull([pt(1, 0.1, n=100), pt(2, 0.2, n=math.inf)])


def test_presets():
    assert preset("medium") == CodecParams(128, 0.2, 4, 4)
    assert preset("low") == CodecParams(2, 1.6, 2, 2)
    assert preset("high") == CodecParams(128, 0.1, 16, 16)
    with pytest.raises(ValueError, match="unknown preset"):
        preset("turbo")


def test_sweep_single_cell_consistency(small_planted):
    Z, _ = small_planted
    cells = sweep(Z, [8], [0.1], [8], [8], [math.inf], seed=0)
    assert len(cells) == 1
    cell = cells[0]
    assert cell.error is None
    qd = build_side_info(Z, CodecParams(8, 0.1, 8, 8, dim=Z.dim), seed=0)
    codes = encode_collection(Z, qd, 0.1, 8)
    rep = fidelity_report(Z, decode_collection(codes, qd))
    assert cell.fidelity == pytest.approx(rep.mean_cosine)


def test_sweep_lambda_fidelity_ordering(small_planted):
    Z, _ = small_planted
    cells = sweep(Z, [8], [0.05, 1.0], [16], [16], [math.inf], seed=0)
    by_lam = {c.params.lam: c for c in cells}
    assert by_lam[0.05].fidelity >= by_lam[1.0].fidelity


def test_sweep_empty_grid_rejected(small_planted):
    Z, _ = small_planted
    with pytest.raises(ValueError):
        sweep(Z, [], [0.1], [8], [8], [math.inf])


def test_sweep_failed_cells_recorded(small_planted):
    Z, _ = small_planted
    # huge lambda forces empty codes -> decode failure recorded, not raised
    cells = sweep(Z, [8], [1e9], [8], [8], [math.inf], seed=0)
    assert len(cells) == 1
    assert cells[0].error is not None
