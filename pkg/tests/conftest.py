import numpy as np
import pytest

from benignbench.filters import convolve_separable, gaussian_kernel


def make_natural_image(seed: int, size: int = 80) -> np.ndarray:
    """Synthetic image with natural-ish statistics: smooth shading,
    mid-frequency texture, and a few hard edges."""
    rs = np.random.RandomState(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    img = np.empty((size, size, 3), dtype=np.float64)
    for c in range(3):
        shading = 0.5 + 0.25 * np.sin(xx / (11.0 + 2 * c)) + 0.2 * np.cos(yy / (7.0 + c))
        texture = convolve_separable(rs.rand(size, size), gaussian_kernel(5)) - 0.5
        img[..., c] = shading + 0.35 * texture
    # rectangle and diagonal edge for sharp content
    img[size // 4 : size // 2, size // 3 : size // 2, :] += 0.2
    img[yy > xx + size // 2] -= 0.15
    lo, hi = img.min(), img.max()
    return ((img - lo) / (hi - lo)).astype(np.float32)


@pytest.fixture(scope="session")
def natural_images():
    return [make_natural_image(seed) for seed in range(6)]


@pytest.fixture()
def small_frame():
    return make_natural_image(99, size=32)


@pytest.fixture(scope="session")
def demo_corpus(tmp_path_factory):
    """The bundled 20-frame synthetic corpus, materialized once."""
    from benignbench.synth import build_demo_corpus

    root = tmp_path_factory.mktemp("demo-corpus")
    manifest = build_demo_corpus(root, seed=42)
    return manifest, root
