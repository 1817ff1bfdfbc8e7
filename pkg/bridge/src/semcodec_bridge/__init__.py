"""Bridge between the semantic codec's SMEB files and the ML ecosystem."""

from . import smeb
from .encoders import ClipEncoder, ImageEncoder, ImageGenerator, UnClipGenerator, pinned_config
from .ops import clipscore, extract, generate

__all__ = [
    "smeb",
    "ClipEncoder",
    "ImageEncoder",
    "ImageGenerator",
    "UnClipGenerator",
    "pinned_config",
    "clipscore",
    "extract",
    "generate",
]

__version__ = "0.1.0"
