"""Dummy model loaders: trivially loadable stand-ins for real detectors.

Every loader takes ``device`` (ignored here) and returns a model
callable: list of float32 (H, W, 3) arrays in [0, 1] -> one score per
frame. Wiring a real detector means writing exactly one such loader;
see the package README for a torch sketch.
"""

from __future__ import annotations

import numpy as np


def constant_half(device: str = "cpu"):
    """Scores every frame 0.5; the protocol-conformance fixture."""

    def model(images):
        return [0.5 for _ in images]

    return model


def brightness(device: str = "cpu"):
    """Mean pixel value as the score; varies per frame, naturally in [0, 1]."""

    def model(images):
        return [float(np.mean(img)) for img in images]

    return model


def real_prob_peaked(device: str = "cpu"):
    """Emits 0.2 meaning P(real): use with score_semantics='p_real',
    the harness must then receive 0.8."""

    def model(images):
        return [0.2 for _ in images]

    return model


def overshooting(device: str = "cpu"):
    """Emits 1.2: exercises the adapter's [0, 1] clamping."""

    def model(images):
        return [1.2 for _ in images]

    return model
