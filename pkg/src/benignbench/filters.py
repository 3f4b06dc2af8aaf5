"""Spatial filter kernels and convolution primitives.

All filters use reflect-101 borders (mirror without repeating the edge
sample) and accumulate in float64 before casting back, so filtering a
constant image returns it bit-identically.
"""

from __future__ import annotations

import numpy as np


def _require_odd(ks: int) -> int:
    if not isinstance(ks, (int, np.integer)) or isinstance(ks, bool):
        raise ValueError(f"kernel size must be an integer, got {ks!r}")
    if ks < 1 or ks % 2 == 0:
        raise ValueError(f"kernel size must be odd and >= 1, got {ks}")
    return int(ks)


def sigma_for_ksize(ks: int) -> float:
    """Gaussian sigma implied by a kernel size.

    The mainstream vision-library convention when only the size is
    given: sigma = 0.3 * ((ks - 1)/2 - 1) + 0.8.
    """
    ks = _require_odd(ks)
    return 0.3 * ((ks - 1) / 2.0 - 1.0) + 0.8


def gaussian_kernel(ks: int) -> np.ndarray:
    """Odd-length 1-D Gaussian taps, normalized to sum 1."""
    ks = _require_odd(ks)
    if ks == 1:
        return np.array([1.0])
    sigma = sigma_for_ksize(ks)
    center = (ks - 1) / 2.0
    x = np.arange(ks, dtype=np.float64) - center
    taps = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return taps / taps.sum()


def box_kernel(ks: int) -> np.ndarray:
    ks = _require_odd(ks)
    return np.full(ks, 1.0 / ks)


def reflect101_indices(n: int, pad: int) -> np.ndarray:
    """Source indices for a length-``n`` axis extended by ``pad`` on each side.

    Reflection is about the edge sample itself (period 2n - 2), which
    stays well defined even when ``pad`` exceeds ``n``.
    """
    idx = np.arange(-pad, n + pad)
    if n == 1:
        return np.zeros_like(idx)
    period = 2 * n - 2
    idx = np.mod(idx, period)
    return np.where(idx >= n, period - idx, idx)


def pad_reflect101(arr: np.ndarray, pad_y: int, pad_x: int) -> np.ndarray:
    out = arr
    if pad_y:
        out = np.take(out, reflect101_indices(out.shape[0], pad_y), axis=0)
    if pad_x:
        out = np.take(out, reflect101_indices(out.shape[1], pad_x), axis=1)
    return out


def _convolve_axis(arr: np.ndarray, taps: np.ndarray, axis: int) -> np.ndarray:
    ks = len(taps)
    half = ks // 2
    if axis == 0:
        padded = pad_reflect101(arr, half, 0)
    else:
        padded = pad_reflect101(arr, 0, half)
    out = np.zeros(arr.shape, dtype=np.float64)
    for k in range(ks):
        if axis == 0:
            out += taps[k] * padded[k : k + arr.shape[0], ...]
        else:
            out += taps[k] * padded[:, k : k + arr.shape[1], ...]
    return out


def convolve_separable(img: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Apply 1-D ``taps`` horizontally then vertically, per channel.

    Input may be (H, W) or (H, W, C); returns float64.
    """
    work = img.astype(np.float64)
    work = _convolve_axis(work, taps, axis=1)
    work = _convolve_axis(work, taps, axis=0)
    return work


def convolve2d(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Full 2-D convolution with reflect-101 borders, float64 output."""
    kh, kw = kernel.shape
    padded = pad_reflect101(img.astype(np.float64), kh // 2, kw // 2)
    out = np.zeros(img.shape, dtype=np.float64)
    h, w = img.shape[:2]
    for i in range(kh):
        for j in range(kw):
            if kernel[i, j] == 0.0:
                continue
            out += kernel[i, j] * padded[i : i + h, j : j + w, ...]
    return out


def median_filter(img: np.ndarray, ks: int) -> np.ndarray:
    """Per-channel ks x ks median with reflect-101 borders."""
    ks = _require_odd(ks)
    if ks == 1:
        return img.copy()
    half = ks // 2
    padded = pad_reflect101(img, half, half)
    windows = np.lib.stride_tricks.sliding_window_view(padded, (ks, ks), axis=(0, 1))
    # windows: (H, W, [C,] ks, ks); ks*ks is odd so the median is an
    # actual element and the dtype is preserved exactly.
    return np.median(windows, axis=(-2, -1)).astype(img.dtype)
