"""Black-box detector scoring through a subprocess batch protocol.

A detector is any command that reads a JSONL batch file (one
``{"frame_id": ..., "path": ...}`` object per line), prints one
``{"frame_id": ..., "score": ...}`` JSONL line per frame to stdout,
and exits 0. Scores are P(fake) in [0, 1]. The protocol is file based
so slow-to-initialize neural detectors amortize model load over a
whole batch.

``mock_score`` is the built-in deterministic detector: a logistic
readout of high-frequency energy. It needs no ML, yet reacts to the
benchmark's operators the way a real detector's confidence does
(blur and recompression lower it, additive noise saturates it), so
the whole harness is testable end to end.
"""

from __future__ import annotations

import json
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DetectorError
from .filters import convolve2d
from .image import luma

LAPLACIAN_3X3 = np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])

#: logistic readout coefficients: score = sigmoid(GAIN * energy + BIAS)
MOCK_GAIN = 25.0
MOCK_BIAS = -2.0


def high_frequency_energy(img: np.ndarray) -> float:
    """Mean absolute 3x3-Laplacian response over the luma channel."""
    response = convolve2d(luma(img), LAPLACIAN_3X3)
    return float(np.mean(np.abs(response)))


def mock_score(img: np.ndarray) -> float:
    """Deterministic stand-in detector score in [0, 1]."""
    energy = high_frequency_energy(img)
    return float(1.0 / (1.0 + np.exp(-(MOCK_GAIN * energy + MOCK_BIAS))))


@dataclass(frozen=True)
class ScoreRecord:
    frame_id: str
    score: float


@dataclass(frozen=True)
class DetectorSpec:
    """How to invoke one detector command.

    ``command_template`` must contain the ``{batch_file}`` placeholder
    exactly once; it is replaced by the path of the JSONL batch file.
    """

    name: str
    command_template: str
    timeout: float = 600.0

    def __post_init__(self):
        count = self.command_template.count("{batch_file}")
        if count != 1:
            raise DetectorError(
                f"detector {self.name!r}: template must contain "
                f"{{batch_file}} exactly once, found {count}"
            )


def write_batch_file(batch, path) -> None:
    """Write (frame_id, path) pairs as protocol JSONL."""
    with open(path, "w", encoding="utf-8") as fh:
        for frame_id, frame_path in batch:
            fh.write(json.dumps({"frame_id": frame_id, "path": str(frame_path)}) + "\n")


def parse_score_lines(lines, expected_ids) -> list[ScoreRecord]:
    """Validate protocol output against the requested batch.

    Exactly one in-range score per requested frame_id; anything else
    (missing, duplicate, unknown, out of range, unparseable) raises
    DetectorError naming the offender.
    """
    expected = list(expected_ids)
    expected_set = set(expected)
    seen: dict[str, float] = {}
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            frame_id = obj["frame_id"]
            score = obj["score"]
        except (json.JSONDecodeError, KeyError, TypeError):
            raise DetectorError(
                f"unparseable detector output at line {line_no}: {line!r}"
            ) from None
        if not isinstance(score, (int, float)) or isinstance(score, bool):
            raise DetectorError(f"line {line_no}: score {score!r} is not a number")
        if not 0.0 <= float(score) <= 1.0:
            raise DetectorError(
                f"line {line_no}: score {score} for {frame_id!r} outside [0, 1]"
            )
        if frame_id in seen:
            raise DetectorError(f"line {line_no}: duplicate score for {frame_id!r}")
        if frame_id not in expected_set:
            raise DetectorError(f"line {line_no}: unknown frame_id {frame_id!r}")
        seen[frame_id] = float(score)
    missing = [fid for fid in expected if fid not in seen]
    if missing:
        raise DetectorError(
            f"detector returned {len(seen)}/{len(expected)} scores; "
            f"missing: {', '.join(missing)}"
        )
    return [ScoreRecord(fid, seen[fid]) for fid in expected]


def run_detector(spec: DetectorSpec, batch) -> list[ScoreRecord]:
    """Score a batch of (frame_id, path) pairs with one subprocess call."""
    batch = list(batch)
    with tempfile.TemporaryDirectory(prefix="bench-batch-") as tmp:
        batch_file = Path(tmp) / "batch.jsonl"
        write_batch_file(batch, batch_file)
        argv = [
            token.replace("{batch_file}", str(batch_file))
            for token in shlex.split(spec.command_template)
        ]
        try:
            proc = subprocess.run(
                argv, capture_output=True, text=True, timeout=spec.timeout
            )
        except subprocess.TimeoutExpired:
            raise DetectorError(
                f"detector {spec.name!r} timed out after {spec.timeout}s"
            ) from None
        except OSError as exc:
            raise DetectorError(f"cannot launch detector {spec.name!r}: {exc}") from None
    if proc.returncode != 0:
        stderr = proc.stderr.strip()
        raise DetectorError(
            f"detector {spec.name!r} exited {proc.returncode}"
            + (f": {stderr}" if stderr else "")
        )
    return parse_score_lines(proc.stdout.splitlines(), [fid for fid, _ in batch])


def score_batch_file(batch_file) -> list[str]:
    """Mock-detector implementation of the protocol: batch file -> JSONL lines."""
    from .image import read_png

    lines = []
    with open(batch_file, encoding="utf-8") as fh:
        for raw in fh:
            raw = raw.strip()
            if not raw:
                continue
            obj = json.loads(raw)
            img = read_png(obj["path"])
            lines.append(
                json.dumps({"frame_id": obj["frame_id"], "score": mock_score(img)})
            )
    return lines
