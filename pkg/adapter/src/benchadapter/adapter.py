"""Batch scoring loop: load model once, score frames, emit protocol JSONL."""

from __future__ import annotations

import importlib
import json
import sys
from dataclasses import dataclass

import numpy as np
from PIL import Image

SEMANTICS = ("p_fake", "p_real")


class AdapterError(Exception):
    pass


@dataclass(frozen=True)
class AdapterConfig:
    """How to load and drive one model.

    ``loader`` is a ``module.path:callable`` reference; the callable is
    invoked as ``loader(device=...)`` once and must return a model:
    a callable mapping a list of float32 (H, W, 3) arrays in [0, 1] to
    one score per frame. ``score_semantics`` declares what the model's
    score means: ``p_fake`` passes through, ``p_real`` is inverted so
    the harness always receives P(fake).
    """

    loader: str
    device: str = "cpu"
    batch_size: int = 16
    score_semantics: str = "p_fake"

    def __post_init__(self):
        if self.batch_size < 1:
            raise AdapterError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.score_semantics not in SEMANTICS:
            raise AdapterError(
                f"score_semantics must be one of {SEMANTICS}, got {self.score_semantics!r}"
            )


def resolve_loader(reference: str):
    """Import a ``module.path:callable`` reference."""
    module_name, sep, attr = reference.partition(":")
    if not sep or not module_name or not attr:
        raise AdapterError(
            f"loader reference must look like 'package.module:callable', got {reference!r}"
        )
    try:
        module = importlib.import_module(module_name)
    except ImportError as exc:
        raise AdapterError(f"cannot import {module_name!r}: {exc}") from None
    try:
        loader = getattr(module, attr)
    except AttributeError:
        raise AdapterError(f"{module_name!r} has no attribute {attr!r}") from None
    if not callable(loader):
        raise AdapterError(f"{reference!r} is not callable")
    return loader


def _read_batch(batch_file) -> list[tuple[str, str]]:
    items = []
    try:
        with open(batch_file, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    items.append((str(obj["frame_id"]), str(obj["path"])))
                except (json.JSONDecodeError, KeyError, TypeError):
                    raise AdapterError(f"bad batch line {line_no}: {line!r}") from None
    except OSError as exc:
        raise AdapterError(f"cannot read batch file: {exc}") from None
    return items


def _load_frame(frame_id: str, path: str) -> np.ndarray:
    try:
        with Image.open(path) as im:
            rgb = im.convert("RGB")
            return np.asarray(rgb, dtype=np.float32) / 255.0
    except Exception as exc:
        raise AdapterError(f"unreadable frame {frame_id}: {path}: {exc}") from None


def serve_batch(batch_file, config: AdapterConfig, out=None) -> int:
    """Score every frame in the batch file; returns the frame count.

    Output lines go to ``out`` (default stdout) in batch order, one
    score per frame_id, clamped to [0, 1], inverted first when the
    model emits P(real).
    """
    out = out if out is not None else sys.stdout
    items = _read_batch(batch_file)
    loader = resolve_loader(config.loader)
    try:
        model = loader(device=config.device)
    except AdapterError:
        raise
    except Exception as exc:
        raise AdapterError(f"model load failed: {exc}") from exc

    emitted = 0
    for start in range(0, len(items), config.batch_size):
        chunk = items[start : start + config.batch_size]
        images = [_load_frame(fid, path) for fid, path in chunk]
        try:
            raw_scores = list(model(images))
        except Exception as exc:
            raise AdapterError(f"model inference failed: {exc}") from exc
        if len(raw_scores) != len(chunk):
            raise AdapterError(
                f"model returned {len(raw_scores)} scores for {len(chunk)} frames"
            )
        for (frame_id, _), raw in zip(chunk, raw_scores):
            score = float(raw)
            if config.score_semantics == "p_real":
                score = 1.0 - score
            score = min(max(score, 0.0), 1.0)
            out.write(json.dumps({"frame_id": frame_id, "score": score}) + "\n")
            emitted += 1
    return emitted
