"""Synthetic demo corpus: a tiny labeled frame set with known behavior.

Real datasets in this domain are license-gated, so the harness ships a
generator for a 20-frame stand-in corpus that the mock detector can
actually discriminate:

* "real" frames are smooth random color fields (low high-frequency
  energy, scores near 0),
* "fake" frames add a pixel-level checker texture whose amplitude
  ramps across frames (scores spread from just above threshold to
  saturation).

The texture lives at the highest spatial frequency, which is exactly
what smoothing and recompression destroy first. Accuracy therefore
degrades in the expected direction under the benchmark's operators,
and the graded amplitudes make the degradation progressive rather
than all-or-nothing.

Everything derives from the corpus seed; rebuilding with the same seed
is byte-identical.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .config import CONVENTIONAL_SUITE
from .corpus import FAKE_FAMILIES, ManifestEntry, write_manifest
from .filters import convolve_separable, gaussian_kernel
from .image import write_png
from .rng import Xoshiro256pp, mix_seed

FRAME_SIZE = 96
REAL_VIDEOS = 2
FRAMES_PER_REAL = 2
FRAMES_PER_FAKE = 4

#: weakest fake texture amplitude and per-frame increment (in [0,1] units)
BASE_AMPLITUDE = 0.012
AMPLITUDE_STEP = 0.0025


def _smooth_field(seed: int, size: int) -> np.ndarray:
    """Blurred uniform noise stretched to a mid-range color image."""
    rng = Xoshiro256pp(seed)
    raw = rng.uniforms(size * size * 3).reshape(size, size, 3)
    taps = gaussian_kernel(21)
    smooth = convolve_separable(convolve_separable(raw, taps), taps)
    out = np.empty_like(smooth)
    for c in range(3):
        chan = smooth[..., c]
        lo, hi = chan.min(), chan.max()
        span = hi - lo if hi > lo else 1.0
        out[..., c] = (chan - lo) / span * 0.4 + 0.3
    return out.astype(np.float32)


def _checker(size: int) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size]
    return np.where((xx + yy) % 2 == 0, 1.0, -1.0)[..., None]


def build_demo_corpus(dest, seed: int = 42) -> Path:
    """Write frames plus manifest.csv under ``dest``; returns manifest path."""
    dest = Path(dest)
    frames_dir = dest / "frames"
    frames_dir.mkdir(parents=True, exist_ok=True)
    checker = _checker(FRAME_SIZE)
    entries = []

    def add_frame(video_id, frame_index, label, family, img):
        frame_id = f"{video_id}_f{frame_index:03d}"
        rel = f"frames/{video_id}_{frame_index:03d}.png"
        write_png(img, dest / rel)
        entries.append(
            ManifestEntry(frame_id, video_id, frame_index, label, family, rel)
        )

    for v in range(REAL_VIDEOS):
        video_id = f"real_{v:03d}"
        base = _smooth_field(mix_seed(seed, video_id), FRAME_SIZE)
        for f in range(FRAMES_PER_REAL):
            # faint texture so real scores are not all identical
            amp = 0.001 * (v * FRAMES_PER_REAL + f)
            img = np.clip(base + amp * checker, 0.0, 1.0).astype(np.float32)
            add_frame(video_id, f, "real", "pristine", img)

    rank = 0
    for family in FAKE_FAMILIES:
        video_id = f"{family}_000"
        base = _smooth_field(mix_seed(seed, video_id), FRAME_SIZE)
        for f in range(FRAMES_PER_FAKE):
            amp = BASE_AMPLITUDE + AMPLITUDE_STEP * rank
            rank += 1
            img = np.clip(base + amp * checker, 0.0, 1.0).astype(np.float32)
            add_frame(video_id, f, "fake", family, img)

    manifest_path = dest / "manifest.csv"
    write_manifest(entries, manifest_path)
    return manifest_path


def mock_detector_command() -> str:
    """Command template invoking this package's mock detector."""
    return f"{sys.executable} -m benignbench mock-detector --batch {{batch_file}}"


def demo_config_doc(seed: int = 42, operations=CONVENTIONAL_SUITE) -> dict:
    """Config document for a full conventional-suite run on the demo corpus."""
    return {
        "corpus": {"manifest": "manifest.csv", "root": ".", "n_per_video": 10},
        "seed": seed,
        "threshold": 0.5,
        "aggregation": "frame",
        "per_family": False,
        "output_dir": "run",
        "cache_dir": "cache",
        "detectors": [{"name": "mock", "command": mock_detector_command()}],
        "operations": [
            {"label": label, "category": category, "pipeline": pipeline}
            for label, category, pipeline in operations
        ],
        "series": {
            "jpeg": [["jpeg95", 95], ["jpeg75", 75], ["jpeg50", 50]],
        },
    }


def write_demo(dest, seed: int = 42) -> Path:
    """Demo corpus plus a ready-to-run config; returns the config path."""
    dest = Path(dest)
    build_demo_corpus(dest, seed=seed)
    config_path = dest / "config.json"
    config_path.write_text(
        json.dumps(demo_config_doc(seed=seed), indent=2) + "\n", encoding="utf-8"
    )
    return config_path
