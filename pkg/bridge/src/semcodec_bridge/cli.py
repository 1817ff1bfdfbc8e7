"""Command line interface: extract / generate / clipscore over SMEB files."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import ops
from .encoders import ClipEncoder, ImageEncoder, ImageGenerator, UnClipGenerator


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="semcodec-bridge",
        description="CLIP extraction, UnCLIP generation, and CLIP-cosine "
                    "scoring over SMEB embedding files")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="embed an image folder into SMEB")
    p.add_argument("image_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--device", default="cpu")

    p = sub.add_parser("generate", help="generate images from SMEB latents")
    p.add_argument("latents")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--norm", type=float, default=20.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--device", default="cpu")

    p = sub.add_parser("clipscore",
                       help="mean CLIP cosine between paired image folders")
    p.add_argument("orig_dir")
    p.add_argument("gen_dir")
    p.add_argument("--device", default="cpu")
    return ap


def run(argv: Optional[Sequence[str]] = None,
        encoder: Optional[ImageEncoder] = None,
        generator: Optional[ImageGenerator] = None) -> int:
    """Entry point with injectable backends; returns a process exit code."""
    logging.basicConfig(level=logging.WARNING, format="%(message)s")
    args = _parser().parse_args(argv)
    try:
        if args.command == "extract":
            enc = encoder or ClipEncoder(device=args.device)
            count = ops.extract(args.image_dir, args.out, enc)
            print(f"embedded {count} images -> {args.out}")
        elif args.command == "generate":
            gen = generator or UnClipGenerator(device=args.device)
            paths = ops.generate(args.latents, args.out_dir, gen,
                                 norm=args.norm, seed=args.seed)
            print(f"generated {len(paths)} images -> {args.out_dir}")
        elif args.command == "clipscore":
            enc = encoder or ClipEncoder(device=args.device)
            per_pair, mean = ops.clipscore(args.orig_dir, args.gen_dir, enc)
            for stem in sorted(per_pair):
                print(f"{stem}\t{per_pair[stem]:.4f}")
            print(f"mean CC: {mean:.4f}")
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    raise SystemExit(run())
