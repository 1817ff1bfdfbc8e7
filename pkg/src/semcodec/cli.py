"""Command-line front end. Every subcommand is a thin shell over the
library modules; identical inputs and seeds produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import bitstream, embedding_store, rate_model, rd_optimizer
from .codec import decode_collection, encode_collection, project_residual
from .dict_learner import LearnOptions, learn_dictionary
from .errors import CodecError
from .quantizer import quantize_dictionary
from .rate_model import CodecParams
from .semantic_ops import DEFAULT_TARGET_NORM, combine


def _parse_sizes(raw: str) -> list[float]:
    sizes = []
    for tok in raw.split(","):
        tok = tok.strip()
        sizes.append(math.inf if tok in ("inf", "INF", "Inf") else float(tok))
    return sizes


def _parse_item_ref(ref: str):
    """'<path.smeb>#<index>' (index defaults to 0)."""
    if "#" in ref:
        path, _, idx = ref.rpartition("#")
        return path, int(idx)
    return ref, 0


def _fmt_n(n: float) -> str:
    return "inf" if math.isinf(n) else str(int(n))


def _cmd_learn_dict(args) -> int:
    Z = embedding_store.load(args.input)
    opts = LearnOptions(seed=args.seed)
    T = learn_dictionary(Z, args.atoms, args.lam, opts)
    qd = quantize_dictionary(T, args.bits_dict, lambda_train=args.lam)
    with open(args.out, "wb") as f:
        bits = bitstream.write_dictionary(qd, f)
    print(f"learned dictionary: n_a={qd.n_a} dim={qd.dim} "
          f"b_dict={qd.b_dict} lambda={args.lam} seed={args.seed} "
          f"bits={bits}")
    return 0


def _cmd_encode(args) -> int:
    Z = embedding_store.load(args.input)
    with open(args.dict, "rb") as f:
        qd = bitstream.read_dictionary(f)
    lam = args.lam if args.lam is not None else qd.lambda_train
    codes = encode_collection(Z, qd, lam, args.bits_coef)
    with open(args.out, "wb") as f:
        report = bitstream.write_codes(codes, bitstream.dictionary_id(qd), f)
    print(f"encoded {Z.count} items: lambda={lam:g} b_coef={args.bits_coef} "
          f"mean_bits/item={report.mean_item_bits:.2f} "
          f"container_bytes={report.container_bytes}")
    return 0


def _cmd_decode(args) -> int:
    with open(args.dict, "rb") as f:
        qd = bitstream.read_dictionary(f)
    with open(args.codes, "rb") as f:
        codes = bitstream.read_codes(f, expected_dict_id=bitstream.dictionary_id(qd))
    decoded = decode_collection(codes, qd, target_norm=args.norm)
    embedding_store.save(decoded, args.out)
    print(f"decoded {decoded.count} items to norm {args.norm}")
    return 0


def _cmd_rate(args) -> int:
    with open(args.dict, "rb") as f:
        raw_dict = f.read()
    qd = bitstream.read_dictionary(io.BytesIO(raw_dict))
    with open(args.codes, "rb") as f:
        codes = bitstream.read_codes(f)
    b_coef = codes[0].b_coef
    p = CodecParams(qd.n_a, qd.lambda_train, qd.b_dict, b_coef,
                    dim=qd.dim, image_pixels=args.pixels)
    ks = [c.k for c in codes]
    measured_item_bits = float(np.mean(
        [bitstream.item_payload_bits(k, qd.n_a, b_coef) for k in ks]))
    model_item_bits = rate_model.rate_per_item_model(p)
    dict_bits_measured = len(raw_dict) * 8
    dict_bits_model = rate_model.dict_bits_model(p)
    sic_bits = rate_model.sic_bits_per_item(args.sic_bpp, args.pixels)
    sizes = _parse_sizes(args.sizes)

    print(f"dictionary: n_a={qd.n_a} dim={qd.dim} b_dict={qd.b_dict} "
          f"lambda={qd.lambda_train:g}")
    print(f"codes: N={len(codes)} b_coef={b_coef} "
          f"mean nonnull fraction={np.mean([k / qd.n_a for k in ks]):.4f}")
    print(f"bits/item    model={model_item_bits:.4f} "
          f"measured={measured_item_bits:.4f} "
          f"(measured includes index bits and per-item overhead)")
    print(f"dict bits    model={dict_bits_model:.0f} "
          f"measured={dict_bits_measured} (measured includes header+scales)")
    print(f"SIC baseline {args.sic_bpp:g} bpp = {sic_bits:.2f} bits/item")

    rows = []
    for n in sizes:
        ratio_model = rate_model.compression_ratio(sic_bits, p, n)
        if math.isinf(n):
            measured_total = measured_item_bits
        else:
            measured_total = measured_item_bits + dict_bits_measured / n
        ratio_measured = sic_bits / measured_total
        if math.isinf(n):
            bpp = model_item_bits / args.pixels
        else:
            bpp = (dict_bits_model + n * model_item_bits) / n / args.pixels
        rows.append((_fmt_n(n), ratio_model, ratio_measured, bpp))
        print(f"n={_fmt_n(n):>8}  ratio(model)={ratio_model:10.3f}  "
              f"ratio(measured)={ratio_measured:10.3f}  bpp(model)={bpp:.4e}")
    try:
        n_star = rate_model.break_even_n(dict_bits_model, sic_bits,
                                         model_item_bits)
        print(f"n* (model) = {n_star}")
    except CodecError as exc:
        n_star = None
        print(f"n* (model) = never ({exc})")

    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["n", "ratio_model", "ratio_measured", "bpp_model"])
            for row in rows:
                w.writerow(row)
            w.writerow(["n_star", n_star if n_star is not None else "never",
                        "", ""])
    return 0


_SWEEP_FIELDS = ["n_a", "lambda", "b_dict", "b_coef", "n",
                 "model_bits", "measured_bits", "fidelity", "on_hull", "error"]


def _cmd_sweep(args) -> int:
    Z = embedding_store.load(args.input)
    cells = rd_optimizer.sweep(
        Z,
        [int(x) for x in args.grid_na.split(",")],
        [float(x) for x in args.grid_lambda.split(",")],
        [int(x) for x in args.grid_bdict.split(",")],
        [int(x) for x in args.grid_bcoef.split(",")],
        _parse_sizes(args.sizes),
        seed=args.seed,
    )
    on_hull = set()
    for n in {c.n for c in cells}:
        ok = [c for c in cells if c.n == n and c.error is None]
        if not ok:
            continue
        hull = rd_optimizer.upper_hull([c.point("measured") for c in ok])
        hull_keys = {(p.params, p.n) for p in hull}
        on_hull |= {id(c) for c in ok if (c.params, c.n) in hull_keys}
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(_SWEEP_FIELDS)
        for c in cells:
            w.writerow([c.params.n_a, c.params.lam, c.params.b_dict,
                        c.params.b_coef, _fmt_n(c.n),
                        "" if c.model_bits_per_item is None
                        else repr(c.model_bits_per_item),
                        "" if c.measured_bits_per_item is None
                        else repr(c.measured_bits_per_item),
                        "" if c.fidelity is None else repr(c.fidelity),
                        int(id(c) in on_hull), c.error or ""])
    failed = sum(1 for c in cells if c.error is not None)
    print(f"sweep: {len(cells)} cells ({failed} failed) seed={args.seed} "
          f"metric=mean latent cosine -> {args.out}")
    return 0


def _cmd_hull(args) -> int:
    points = []
    rows = []
    with open(args.csv_file, newline="") as f:
        for row in csv.DictReader(f):
            if row["n"] != _fmt_n(args.n) or row["error"]:
                continue
            p = CodecParams(int(row["n_a"]), float(row["lambda"]),
                            int(row["b_dict"]), int(row["b_coef"]))
            points.append(rd_optimizer.RatePoint(
                p, float(row["measured_bits"]), float(row["fidelity"]),
                args.n))
            rows.append(row)
    if not points:
        raise CodecError(f"no successful rows for n={_fmt_n(args.n)}")
    hull = rd_optimizer.upper_hull(points)
    print(f"upper hull for n={_fmt_n(args.n)} "
          f"({len(hull)} of {len(points)} points):")
    for p in hull:
        print(f"  rate={p.rate_bits_per_item:12.4f} fidelity={p.fidelity:.6f} "
              f"n_a={p.params.n_a} lambda={p.params.lam:g} "
              f"b_dict={p.params.b_dict} b_coef={p.params.b_coef}")
    return 0


def _cmd_ops(args) -> int:
    path_a, idx_a = _parse_item_ref(args.a)
    path_b, idx_b = _parse_item_ref(args.b)
    za = embedding_store.load(path_a).item(idx_a)
    zb = embedding_store.load(path_b).item(idx_b)
    lam = args.alpha if args.op == "add" else -args.alpha
    result = combine(za, zb, lam, target_norm=args.norm)
    out = embedding_store.EmbeddingCollection(
        result[None, :].astype(np.float32))
    embedding_store.save(out, args.out)
    print(f"{args.op}: alpha={args.alpha} norm={args.norm} -> {args.out}")
    return 0


def _cmd_project(args) -> int:
    Z = embedding_store.load(args.input)
    with open(args.dict, "rb") as f:
        qd = bitstream.read_dictionary(f)
    lam = args.lam if args.lam is not None else qd.lambda_train
    projs, resids = [], []
    for i in range(Z.count):
        proj, resid = project_residual(Z.item(i), qd, lam)
        projs.append(proj)
        resids.append(resid)
    embedding_store.save(
        embedding_store.EmbeddingCollection(np.stack(projs).astype(np.float32),
                                            Z.names), args.out_proj)
    embedding_store.save(
        embedding_store.EmbeddingCollection(np.stack(resids).astype(np.float32),
                                            Z.names), args.out_resid)
    print(f"projected {Z.count} items (lambda={lam}) -> "
          f"{args.out_proj}, {args.out_resid}")
    return 0


def _cmd_preset(args) -> int:
    p = rd_optimizer.preset(args.name)
    print(f"n_a={p.n_a} lambda={p.lam:g} b_dict={p.b_dict} b_coef={p.b_coef}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semcodec",
        description="Sparse-dictionary codec for latent embedding collections")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn-dict", help="learn and quantize a dictionary")
    p.add_argument("input")
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bits-dict", type=int, default=16)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_learn_dict)

    p = sub.add_parser("encode", help="encode a collection against a dictionary")
    p.add_argument("input")
    p.add_argument("--dict", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="defaults to the dictionary's training lambda")
    p.add_argument("--bits-coef", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="reconstruct latents from codes")
    p.add_argument("codes")
    p.add_argument("--dict", required=True)
    p.add_argument("--norm", type=float, default=DEFAULT_TARGET_NORM)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("rate", help="model vs measured rate report")
    p.add_argument("--dict", required=True)
    p.add_argument("--codes", required=True)
    p.add_argument("--sic-bpp", type=float, default=rate_model.DEFAULT_SIC_BPP)
    p.add_argument("--sizes", default="100,1000,10000,inf")
    p.add_argument("--pixels", type=int, default=rate_model.DEFAULT_IMAGE_PIXELS)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=_cmd_rate)

    p = sub.add_parser("sweep", help="grid sweep to a CSV report")
    p.add_argument("input")
    p.add_argument("--grid-na", required=True)
    p.add_argument("--grid-lambda", required=True)
    p.add_argument("--grid-bdict", required=True)
    p.add_argument("--grid-bcoef", required=True)
    p.add_argument("--sizes", default="inf")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("hull", help="upper hull of a sweep CSV")
    p.add_argument("csv_file")
    p.add_argument("--n", type=float, default=math.inf)
    p.set_defaults(func=_cmd_hull)

    p = sub.add_parser("ops", help="latent arithmetic on stored items")
    p.add_argument("op", choices=["add", "sub"])
    p.add_argument("a", metavar="a.smeb#i")
    p.add_argument("b", metavar="b.smeb#j")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--norm", type=float, default=DEFAULT_TARGET_NORM)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ops)

    p = sub.add_parser("project", help="split items into projection/residual")
    p.add_argument("input")
    p.add_argument("--dict", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--out-proj", required=True)
    p.add_argument("--out-resid", required=True)
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("preset", help="print a named parameter set")
    p.add_argument("name")
    p.set_defaults(func=_cmd_preset)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CodecError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
