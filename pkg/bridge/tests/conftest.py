import zlib

import numpy as np
import pytest
from PIL import Image


class FakeEncoder:
    """Deterministic stand-in for the CLIP encoder.

    Embeds an image as a seeded Gaussian vector keyed by its 16x16
    grayscale thumbnail, so identical images map to identical embeddings
    and different images are near-orthogonal in 768 dimensions.
    """

    dim = 768

    def encode_batch(self, images):
        out = []
        for im in images:
            thumb = im.convert("L").resize((16, 16))
            seed = zlib.crc32(thumb.tobytes())
            vec = np.random.default_rng(seed).standard_normal(self.dim)
            out.append(20.0 * vec / np.linalg.norm(vec))
        if not out:
            return np.empty((0, self.dim), dtype=np.float32)
        return np.stack(out).astype(np.float32)


class FakeGenerator:
    """Stand-in generator: renders the latent's leading values as a color.

    Inverts (approximately) under FakeEncoder only in the trivial sense
    needed by tests: identical latents give identical images.
    """

    def __init__(self):
        self.seen = []  # (latent, seed) calls, for assertions

    def generate(self, latent, seed):
        self.seen.append((np.array(latent), seed))
        rgb = tuple(int(abs(v) * 10) % 256 for v in latent[:3])
        return Image.new("RGB", (32, 32), rgb)


def make_image(path, seed, size=(24, 24)):
    rng = np.random.default_rng(seed)
    pixels = rng.integers(0, 256, size=(*size, 3), dtype=np.uint8)
    Image.fromarray(pixels, "RGB").save(path)
    return path


@pytest.fixture
def fake_encoder():
    return FakeEncoder()


@pytest.fixture
def fake_generator():
    return FakeGenerator()


@pytest.fixture
def image_dir(tmp_path):
    d = tmp_path / "images"
    d.mkdir()
    for i in range(3):
        make_image(d / f"img_{i}.png", seed=i)
    return d
