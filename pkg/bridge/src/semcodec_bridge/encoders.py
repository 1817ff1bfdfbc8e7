"""Image encoder / generator backends.

Model identifiers are pinned in models.json next to this module. The heavy
ML imports happen lazily inside the backend classes, so everything else in
the package works without torch / transformers / diffusers installed.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Protocol, Sequence

import numpy as np
from PIL import Image


def pinned_config() -> dict:
    """The pinned model identifiers and constants from models.json."""
    with resources.files(__package__).joinpath("models.json").open() as f:
        return json.load(f)


class ImageEncoder(Protocol):
    """Maps a batch of PIL images to (N, dim) float embeddings."""

    dim: int

    def encode_batch(self, images: Sequence[Image.Image]) -> np.ndarray: ...


class ImageGenerator(Protocol):
    """Maps one latent embedding to a PIL image."""

    def generate(self, latent: np.ndarray, seed: int) -> Image.Image: ...


def _missing(package: str, purpose: str) -> RuntimeError:
    return RuntimeError(
        f"{purpose} needs the optional ML stack; '{package}' is not "
        f"importable. Install with: pip install 'semcodec-bridge[models]'")


class ClipEncoder:
    """Frozen CLIP image encoder producing 768-dimensional embeddings."""

    def __init__(self, model_id: str | None = None, device: str = "cpu",
                 batch_size: int = 16):
        cfg = pinned_config()
        self.dim = int(cfg["embedding_dim"])
        self.batch_size = batch_size
        try:
            import torch
            from transformers import CLIPImageProcessor, CLIPVisionModelWithProjection
        except ImportError as exc:
            raise _missing(exc.name or "transformers",
                           "CLIP embedding extraction") from exc
        self._torch = torch
        model_id = model_id or cfg["clip_model"]
        self._processor = CLIPImageProcessor.from_pretrained(model_id)
        self._model = CLIPVisionModelWithProjection.from_pretrained(model_id)
        self._model.eval().to(device)
        self._device = device

    def encode_batch(self, images: Sequence[Image.Image]) -> np.ndarray:
        torch = self._torch
        out = []
        with torch.no_grad():
            for start in range(0, len(images), self.batch_size):
                batch = [im.convert("RGB")
                         for im in images[start:start + self.batch_size]]
                inputs = self._processor(images=batch, return_tensors="pt")
                embeds = self._model(
                    inputs["pixel_values"].to(self._device)).image_embeds
                out.append(embeds.cpu().numpy())
        if not out:
            return np.empty((0, self.dim), dtype=np.float32)
        return np.concatenate(out).astype(np.float32)


class UnClipGenerator:
    """Stable UnCLIP decoder conditioning on a single image embedding."""

    def __init__(self, model_id: str | None = None, device: str = "cpu",
                 num_inference_steps: int = 20):
        cfg = pinned_config()
        try:
            import torch
            from diffusers import StableUnCLIPImg2ImgPipeline
        except ImportError as exc:
            raise _missing(exc.name or "diffusers",
                           "UnCLIP image generation") from exc
        self._torch = torch
        self._steps = num_inference_steps
        self._pipe = StableUnCLIPImg2ImgPipeline.from_pretrained(
            model_id or cfg["unclip_model"])
        self._pipe.to(device)
        self._device = device

    def generate(self, latent: np.ndarray, seed: int) -> Image.Image:
        torch = self._torch
        embeds = torch.as_tensor(np.asarray(latent, dtype=np.float32))[None, :]
        generator = torch.Generator(device=self._device).manual_seed(seed)
        result = self._pipe(image_embeds=embeds.to(self._device),
                            generator=generator,
                            num_inference_steps=self._steps)
        return result.images[0]
