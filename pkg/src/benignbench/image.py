"""Frame buffer conventions and PNG I/O.

A frame in memory is a ``float32`` array of shape (H, W, 3), RGB,
every sample in [0, 1]. Files on disk are 8-bit 3-channel PNG; the
byte/float boundary is ``value = byte / 255`` and its exact inverse.
All operators keep to this convention, so quantization happens only
when a frame crosses a file boundary (or enters the JPEG encoder).
"""

from __future__ import annotations

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageError

#: BT.601 luma weights, also used by the JPEG color transform.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def ensure_image(arr: np.ndarray) -> np.ndarray:
    """Validate the in-memory frame convention; returns ``arr`` unchanged."""
    if not isinstance(arr, np.ndarray):
        raise ImageError(f"expected ndarray, got {type(arr).__name__}")
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ImageError(f"expected (H, W, 3) RGB buffer, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ImageError(f"degenerate image dimensions {arr.shape[:2]}")
    if not np.issubdtype(arr.dtype, np.floating):
        raise ImageError(f"expected float buffer, got dtype {arr.dtype}")
    if not np.all(np.isfinite(arr)):
        raise ImageError("image contains non-finite samples")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ImageError("image samples outside [0, 1]")
    return arr


def from_uint8(arr: np.ndarray) -> np.ndarray:
    return (arr.astype(np.float64) / 255.0).astype(np.float32)


def to_uint8(arr: np.ndarray) -> np.ndarray:
    scaled = np.clip(arr.astype(np.float64), 0.0, 1.0) * 255.0
    return np.rint(scaled).astype(np.uint8)


def read_png(path) -> np.ndarray:
    """Load an 8-bit RGB image file as a float frame buffer.

    Anything that is not 3-channel 8-bit (grayscale, palette, alpha,
    16-bit) is rejected: the pipeline operates on color frames only.
    """
    try:
        with Image.open(path) as im:
            if im.mode != "RGB":
                raise ImageError(
                    f"{path}: unsupported image mode {im.mode!r} (need 8-bit RGB)"
                )
            data = np.asarray(im, dtype=np.uint8)
    except FileNotFoundError:
        raise ImageError(f"{path}: file not found") from None
    except UnidentifiedImageError:
        raise ImageError(f"{path}: not a decodable image") from None
    except OSError as exc:
        raise ImageError(f"{path}: {exc}") from None
    return from_uint8(data)


def write_png(arr: np.ndarray, path) -> None:
    Image.fromarray(to_uint8(arr), mode="RGB").save(path, format="PNG")


def luma(arr: np.ndarray) -> np.ndarray:
    """BT.601 luma plane (float, same range as input)."""
    r, g, b = LUMA_WEIGHTS
    return r * arr[..., 0] + g * arr[..., 1] + b * arr[..., 2]


def mse(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise ImageError(f"shape mismatch {a.shape} vs {b.shape}")
    diff = a.astype(np.float64) - b.astype(np.float64)
    return float(np.mean(diff * diff))


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB for [0, 1] buffers; inf if equal."""
    err = mse(a, b)
    if err == 0.0:
        return float("inf")
    return float(10.0 * np.log10(1.0 / err))
