"""Labeled frame corpus: manifest parsing, frame selection, validation.

The manifest is a UTF-8 CSV with header
``frame_id,video_id,frame_index,label,family,path``. Paths are
relative to a corpus root directory and point at 8-bit RGB PNG frames
that arrive pre-cropped and pre-aligned; face detection happens
upstream of this harness.
"""

from __future__ import annotations

import csv
import hashlib
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ImageError, ManifestError
from .image import read_png

MANIFEST_FIELDS = ("frame_id", "video_id", "frame_index", "label", "family", "path")

LABELS = frozenset({"real", "fake"})
FAMILIES = frozenset(
    {"pristine", "deepfake", "faceswap", "face2face", "neuraltextures", "other"}
)
FAKE_FAMILIES = ("deepfake", "faceswap", "face2face", "neuraltextures")


@dataclass(frozen=True)
class ManifestEntry:
    frame_id: str
    video_id: str
    frame_index: int
    label: str
    family: str
    path: str

    @property
    def is_fake(self) -> bool:
        return self.label == "fake"


def load_manifest(path) -> list[ManifestEntry]:
    """Parse a manifest file, preserving file order.

    Raises ManifestError with the offending row number for malformed
    rows and duplicate frame ids.
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"{path}: empty manifest") from None
        if tuple(h.strip() for h in header) != MANIFEST_FIELDS:
            raise ManifestError(
                f"{path}: bad header {header!r}, expected {','.join(MANIFEST_FIELDS)}"
            )
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(MANIFEST_FIELDS):
                raise ManifestError(
                    f"{path}:{row_no}: expected {len(MANIFEST_FIELDS)} fields, got {len(row)}"
                )
            frame_id, video_id, index_text, label, family, rel = (
                cell.strip() for cell in row
            )
            if not frame_id:
                raise ManifestError(f"{path}:{row_no}: empty frame_id")
            if frame_id in seen:
                raise ManifestError(f"{path}:{row_no}: duplicate frame_id {frame_id!r}")
            try:
                frame_index = int(index_text)
            except ValueError:
                raise ManifestError(
                    f"{path}:{row_no}: frame_index {index_text!r} is not an integer"
                ) from None
            if frame_index < 0:
                raise ManifestError(f"{path}:{row_no}: negative frame_index {frame_index}")
            if label not in LABELS:
                raise ManifestError(f"{path}:{row_no}: unknown label {label!r}")
            if family not in FAMILIES:
                raise ManifestError(f"{path}:{row_no}: unknown family {family!r}")
            if not rel:
                raise ManifestError(f"{path}:{row_no}: empty path")
            seen.add(frame_id)
            entries.append(
                ManifestEntry(frame_id, video_id, frame_index, label, family, rel)
            )
    return entries


def write_manifest(entries, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_FIELDS)
        for e in entries:
            writer.writerow(
                (e.frame_id, e.video_id, str(e.frame_index), e.label, e.family, e.path)
            )


def select_frames(entries, n_per_video: int) -> list[ManifestEntry]:
    """Keep the ``n_per_video`` lowest-index frames of each video.

    Videos with fewer frames keep everything; the output preserves the
    manifest order of the surviving entries.
    """
    if n_per_video < 1:
        raise ValueError(f"n_per_video must be >= 1, got {n_per_video}")
    by_video: dict[str, list[ManifestEntry]] = {}
    for entry in entries:
        by_video.setdefault(entry.video_id, []).append(entry)
    keep: set[str] = set()
    for frames in by_video.values():
        chosen = sorted(frames, key=lambda e: e.frame_index)[:n_per_video]
        keep.update(e.frame_id for e in chosen)
    return [e for e in entries if e.frame_id in keep]


def family_counts(entries) -> dict[str, int]:
    return dict(Counter(e.family for e in entries))


def load_frame(entry: ManifestEntry, root) -> np.ndarray:
    """Read an entry's PNG into a float [0, 1] frame buffer."""
    return read_png(Path(root) / entry.path)


@dataclass(frozen=True)
class ValidationIssue:
    kind: str  # missing_file | undecodable | dimension_outlier | label_family_mismatch
    frame_id: str
    detail: str

    #: issue kinds that make a corpus unusable (outliers are advisory)
    FATAL_KINDS = ("missing_file", "undecodable", "label_family_mismatch")

    @property
    def fatal(self) -> bool:
        return self.kind in self.FATAL_KINDS


@dataclass
class ValidationReport:
    issues: list[ValidationIssue]
    n_entries: int

    @property
    def ok(self) -> bool:
        return not self.issues

    @property
    def usable(self) -> bool:
        return not any(issue.fatal for issue in self.issues)

    def summary(self) -> str:
        if self.ok:
            return f"corpus valid: {self.n_entries} frames, no issues"
        lines = [f"corpus has {len(self.issues)} issue(s) across {self.n_entries} frames:"]
        for issue in self.issues:
            lines.append(f"  [{issue.kind}] {issue.frame_id}: {issue.detail}")
        return "\n".join(lines)


def validate_corpus(entries, root) -> ValidationReport:
    """Check files, decodability, label/family consistency, dimensions.

    Problems are collected, never raised. Dimension outliers are only
    flagged when a clear modal frame size exists (>= 80% of decodable
    frames); fully heterogeneous corpora are accepted as-is.
    """
    root = Path(root)
    issues: list[ValidationIssue] = []
    dims: dict[str, tuple[int, int]] = {}
    for entry in entries:
        if (entry.label == "real") != (entry.family == "pristine"):
            issues.append(
                ValidationIssue(
                    "label_family_mismatch",
                    entry.frame_id,
                    f"label={entry.label} with family={entry.family}",
                )
            )
        frame_path = root / entry.path
        if not frame_path.is_file():
            issues.append(
                ValidationIssue("missing_file", entry.frame_id, str(frame_path))
            )
            continue
        try:
            frame = read_png(frame_path)
        except ImageError as exc:
            issues.append(ValidationIssue("undecodable", entry.frame_id, str(exc)))
            continue
        dims[entry.frame_id] = frame.shape[:2]

    if dims:
        counts = Counter(dims.values())
        modal, modal_count = counts.most_common(1)[0]
        if modal_count / len(dims) >= 0.8:
            for entry in entries:
                size = dims.get(entry.frame_id)
                if size is not None and size != modal:
                    issues.append(
                        ValidationIssue(
                            "dimension_outlier",
                            entry.frame_id,
                            f"{size[1]}x{size[0]} vs modal {modal[1]}x{modal[0]}",
                        )
                    )
    return ValidationReport(issues=issues, n_entries=len(entries))


def content_digest(entries, root) -> str:
    """Hex digest over manifest rows and frame bytes; identifies a corpus."""
    root = Path(root)
    h = hashlib.sha256()
    for e in entries:
        row = f"{e.frame_id},{e.video_id},{e.frame_index},{e.label},{e.family},{e.path}\n"
        h.update(row.encode("utf-8"))
        frame_path = root / e.path
        if frame_path.is_file():
            h.update(frame_path.read_bytes())
    return h.hexdigest()
