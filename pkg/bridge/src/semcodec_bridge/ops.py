"""The three bridge operations: extract, generate, clipscore.

Each takes its backend (encoder / generator) as an argument so that tests
and callers can substitute lightweight implementations; the CLI wires in
the pinned CLIP / UnCLIP backends.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from . import smeb
from .encoders import ImageEncoder, ImageGenerator

log = logging.getLogger("semcodec_bridge")

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".gif", ".tiff", ".webp"}


def _image_files(directory) -> list[Path]:
    root = Path(directory)
    if not root.is_dir():
        raise NotADirectoryError(f"not a directory: {root}")
    return sorted(p for p in root.iterdir()
                  if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)


def _load_images(paths: list[Path]) -> tuple[list[Image.Image], list[Path]]:
    images, kept = [], []
    for path in paths:
        try:
            with Image.open(path) as im:
                images.append(im.convert("RGB"))
            kept.append(path)
        except (UnidentifiedImageError, OSError) as exc:
            log.warning("skipping unreadable image %s: %s", path, exc)
    return images, kept


def extract(image_dir, out_path, encoder: ImageEncoder) -> int:
    """Embed every readable image in a directory into an SMEB file.

    Returns the number of embedded images; names in the file are the
    image file names, in sorted order.
    """
    images, kept = _load_images(_image_files(image_dir))
    if not images:
        log.warning("no readable images in %s; writing empty collection",
                    image_dir)
        vectors = np.empty((0, encoder.dim), dtype=np.float32)
    else:
        vectors = encoder.encode_batch(images)
        if vectors.shape != (len(images), encoder.dim):
            raise RuntimeError(
                f"encoder returned shape {vectors.shape}, expected "
                f"{(len(images), encoder.dim)}")
    smeb.save(vectors, out_path, names=[p.name for p in kept])
    return len(kept)


def generate(latents_path, out_dir, generator: ImageGenerator,
             norm: float = 20.0, seed: int = 0) -> list[Path]:
    """Generate one image per latent in an SMEB file.

    Latents are renormalized to `norm` before conditioning; zero latents
    are rejected. Output files are named after the stored embedding names
    (or their index) with a .png suffix.
    """
    vectors, names = smeb.load(latents_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i, vec in enumerate(vectors):
        magnitude = float(np.linalg.norm(vec))
        if magnitude < 1e-12:
            raise ValueError(f"latent {i} is a zero vector; cannot condition "
                             "generation on it")
        latent = np.asarray(vec, dtype=np.float64) * (norm / magnitude)
        stem = Path(names[i]).stem if names else f"{i:06d}"
        path = out / f"{stem}.png"
        generator.generate(latent, seed=seed + i).save(path)
        written.append(path)
    return written


def clipscore(orig_dir, gen_dir,
              encoder: ImageEncoder) -> tuple[dict[str, float], float]:
    """Cosine between embeddings of name-paired images in two directories.

    Pairing is by file stem; every original must have a generated
    counterpart and vice versa. Returns (per-pair cosines, mean).
    """
    orig = {p.stem: p for p in _image_files(orig_dir)}
    gen = {p.stem: p for p in _image_files(gen_dir)}
    unpaired = sorted(set(orig) ^ set(gen))
    if unpaired:
        raise ValueError(f"unpaired files: {', '.join(unpaired[:5])}"
                         + (" ..." if len(unpaired) > 5 else ""))
    if not orig:
        raise ValueError("no image pairs to score")
    stems = sorted(orig)
    images, kept = _load_images([orig[s] for s in stems]
                                + [gen[s] for s in stems])
    if len(kept) != 2 * len(stems):
        raise ValueError("unreadable image among the pairs")
    embeds = encoder.encode_batch(images).astype(np.float64)
    a, b = embeds[:len(stems)], embeds[len(stems):]
    cosines = np.sum(a * b, axis=1) / (np.linalg.norm(a, axis=1)
                                       * np.linalg.norm(b, axis=1))
    per_pair = {s: float(c) for s, c in zip(stems, cosines)}
    return per_pair, float(np.mean(cosines))
