"""Experiment configuration: schema, parsing, validation.

A config is one JSON document describing a full experiment::

    {
      "corpus": {"manifest": "manifest.csv", "root": ".", "n_per_video": 10},
      "seed": 42,
      "threshold": 0.5,
      "aggregation": "frame",
      "output_dir": "runs/demo",
      "cache_dir": ".bench_cache",
      "detectors": [
        {"name": "mock", "command": "bench mock-detector --batch {batch_file}"}
      ],
      "operations": [
        {"label": "raw", "category": "Raw", "pipeline": "identity"},
        {"label": "jpeg95", "category": "Image Transcoding",
         "pipeline": "jpeg:quality=95"},
        {"label": "h264_c23", "category": "Video Compression",
         "video": {"codec": "h264", "crf": 23, "fps": 30}},
        {"label": "hific_low", "category": "AI-based Compression",
         "external": {"command": "hific-wrap --preset low {in_dir} {out_dir}"}}
      ],
      "series": {"jpeg": [["jpeg95", 95], ["jpeg75", 75], ["jpeg50", 50]]}
    }

Paths are resolved relative to the config file's directory. Exactly
one operation must be labeled "raw" with the identity pipeline; it is
the baseline all deltas are computed against.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .detector import DetectorSpec
from .errors import ConfigError, DetectorError, ExternalOpError, PipelineError
from .external import (
    DEFAULT_DECODE_TEMPLATE,
    DEFAULT_ENCODE_TEMPLATE,
    ExternalOpSpec,
    VideoCodecSpec,
)
from .metrics import BASELINE_LABEL
from .operators import parse_pipeline
from .report import CATEGORIES

CACHE_ENV_VAR = "BENCH_CACHE_DIR"
DEFAULT_CACHE_DIR = ".bench_cache"

#: the conventional single-image operation suite, ready to drop into a
#: config: (label, category, pipeline string)
CONVENTIONAL_SUITE = (
    ("raw", "Raw", "identity"),
    ("jpeg95", "Image Transcoding", "jpeg:quality=95"),
    ("jpeg75", "Image Transcoding", "jpeg:quality=75"),
    ("jpeg50", "Image Transcoding", "jpeg:quality=50"),
    ("gblur3", "Image Smoothing", "gblur:ks=3"),
    ("gblur5", "Image Smoothing", "gblur:ks=5"),
    ("meanblur5", "Image Smoothing", "meanblur:ks=5"),
    ("medianblur5", "Image Smoothing", "medianblur:ks=5"),
    ("gnoise_001", "Additive Noise", "gnoise:mean=0,var=0.01"),
    ("gnoise_005", "Additive Noise", "gnoise:mean=0,var=0.05"),
    ("gamma_04", "Gamma Correction", "gamma:g=0.4"),
    ("gamma_25", "Gamma Correction", "gamma:g=2.5"),
    ("gn_gb", "Combination", "gnoise:mean=0,var=0.01|gblur:ks=5"),
    ("gb_gc", "Combination", "gblur:ks=5|gamma:g=0.4"),
    ("gb_jpeg95", "Combination", "gblur:ks=5|jpeg:quality=95"),
    ("gc_jpeg95", "Combination", "gamma:g=0.4|jpeg:quality=95"),
    ("resize_13", "Resizing", "resize:scale=1.3"),
)


@dataclass(frozen=True)
class CorpusConfig:
    manifest: Path
    root: Path
    n_per_video: int = 10


@dataclass(frozen=True)
class VideoOpConfig:
    spec: VideoCodecSpec
    encode_template: str = DEFAULT_ENCODE_TEMPLATE
    decode_template: str = DEFAULT_DECODE_TEMPLATE
    timeout: float = 600.0


@dataclass(frozen=True)
class OperationConfig:
    """One benchmark row: exactly one of pipeline/external/video is set."""

    label: str
    category: str
    pipeline: str | None = None
    external: ExternalOpSpec | None = None
    video: VideoOpConfig | None = None

    @property
    def kind(self) -> str:
        if self.pipeline is not None:
            return "pipeline"
        return "external" if self.external is not None else "video"

    def describe(self) -> str:
        if self.pipeline is not None:
            return self.pipeline
        if self.external is not None:
            return f"external:{self.external.name}"
        spec = self.video.spec
        return f"video:{spec.codec}:crf={spec.crf}"


@dataclass
class ExperimentConfig:
    corpus: CorpusConfig
    operations: list[OperationConfig]
    detectors: list[DetectorSpec]
    seed: int = 0
    threshold: float = 0.5
    aggregation: str = "frame"
    per_family: bool = False
    workers: int = 4
    cache_dir: Path = Path(DEFAULT_CACHE_DIR)
    output_dir: Path = Path("runs/latest")
    series: dict[str, list[tuple[str, float]]] = field(default_factory=dict)
    source: dict | None = None  # raw document, copied into the run dir


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise ConfigError(f"{where}: missing required key {key!r}")
    return doc[key]


def _parse_operation(doc: dict, index: int) -> OperationConfig:
    where = f"operations[{index}]"
    if not isinstance(doc, dict):
        raise ConfigError(f"{where}: expected an object")
    label = str(_require(doc, "label", where))
    category = str(_require(doc, "category", where))
    if category not in CATEGORIES:
        raise ConfigError(
            f"{where}: unknown category {category!r} (known: {', '.join(CATEGORIES)})"
        )
    kinds = [k for k in ("pipeline", "external", "video") if k in doc]
    if len(kinds) != 1:
        raise ConfigError(
            f"{where}: need exactly one of pipeline/external/video, got {kinds}"
        )
    if kinds[0] == "pipeline":
        text = str(doc["pipeline"])
        try:
            parse_pipeline(text)
        except PipelineError as exc:
            raise ConfigError(f"{where}: bad pipeline: {exc}") from None
        return OperationConfig(label=label, category=category, pipeline=text)
    if kinds[0] == "external":
        ext = doc["external"]
        try:
            spec = ExternalOpSpec(
                name=label,
                command_template=str(_require(ext, "command", f"{where}.external")),
                timeout=float(ext.get("timeout", 600.0)),
                params=tuple(sorted((str(k), str(v)) for k, v in ext.get("params", {}).items())),
            )
        except ExternalOpError as exc:
            raise ConfigError(f"{where}: {exc}") from None
        return OperationConfig(label=label, category=category, external=spec)
    vid = doc["video"]
    try:
        spec = VideoCodecSpec(
            codec=str(_require(vid, "codec", f"{where}.video")),
            crf=int(_require(vid, "crf", f"{where}.video")),
            fps=int(vid.get("fps", 30)),
        )
    except ExternalOpError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    video = VideoOpConfig(
        spec=spec,
        encode_template=str(vid.get("encode", DEFAULT_ENCODE_TEMPLATE)),
        decode_template=str(vid.get("decode", DEFAULT_DECODE_TEMPLATE)),
        timeout=float(vid.get("timeout", 600.0)),
    )
    return OperationConfig(label=label, category=category, video=video)


def parse_config(doc: dict, base_dir: Path) -> ExperimentConfig:
    """Validate a config document; all errors are ConfigError."""
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    corpus_doc = _require(doc, "corpus", "config")
    corpus = CorpusConfig(
        manifest=base_dir / str(_require(corpus_doc, "manifest", "corpus")),
        root=base_dir / str(corpus_doc.get("root", ".")),
        n_per_video=int(corpus_doc.get("n_per_video", 10)),
    )
    if corpus.n_per_video < 1:
        raise ConfigError(f"corpus.n_per_video must be >= 1, got {corpus.n_per_video}")

    ops_doc = _require(doc, "operations", "config")
    if not isinstance(ops_doc, list) or not ops_doc:
        raise ConfigError("config: operations must be a non-empty list")
    operations = [_parse_operation(op, i) for i, op in enumerate(ops_doc)]
    labels = [op.label for op in operations]
    dupes = {l for l in labels if labels.count(l) > 1}
    if dupes:
        raise ConfigError(f"duplicate operation labels: {', '.join(sorted(dupes))}")
    raw_ops = [op for op in operations if op.label == BASELINE_LABEL]
    if len(raw_ops) != 1:
        raise ConfigError(
            f"config must contain exactly one operation labeled {BASELINE_LABEL!r}, "
            f"found {len(raw_ops)}"
        )
    if raw_ops[0].pipeline != "identity":
        raise ConfigError(
            f"operation {BASELINE_LABEL!r} must use the identity pipeline, "
            f"got {raw_ops[0].describe()!r}"
        )

    det_doc = _require(doc, "detectors", "config")
    if not isinstance(det_doc, list) or not det_doc:
        raise ConfigError("config: detectors must be a non-empty list")
    detectors = []
    for i, det in enumerate(det_doc):
        try:
            detectors.append(
                DetectorSpec(
                    name=str(_require(det, "name", f"detectors[{i}]")),
                    command_template=str(_require(det, "command", f"detectors[{i}]")),
                    timeout=float(det.get("timeout", 600.0)),
                )
            )
        except DetectorError as exc:
            raise ConfigError(f"detectors[{i}]: {exc}") from None
    names = [d.name for d in detectors]
    if len(set(names)) != len(names):
        raise ConfigError("detector names must be unique")

    threshold = float(doc.get("threshold", 0.5))
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"threshold must be in [0, 1], got {threshold}")
    aggregation = str(doc.get("aggregation", "frame"))
    if aggregation not in ("frame", "video"):
        raise ConfigError(f"aggregation must be 'frame' or 'video', got {aggregation!r}")
    seed = int(doc.get("seed", 0))
    workers = int(doc.get("workers", 4))
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")

    cache_dir = doc.get("cache_dir") or os.environ.get(CACHE_ENV_VAR) or DEFAULT_CACHE_DIR
    output_dir = doc.get("output_dir", "runs/latest")

    series: dict[str, list[tuple[str, float]]] = {}
    for family, points in (doc.get("series") or {}).items():
        parsed = []
        for point in points:
            if not isinstance(point, (list, tuple)) or len(point) != 2:
                raise ConfigError(f"series[{family!r}]: points must be [label, x] pairs")
            label, x = point
            if label not in labels:
                raise ConfigError(
                    f"series[{family!r}]: unknown operation label {label!r}"
                )
            parsed.append((str(label), float(x)))
        series[str(family)] = parsed

    return ExperimentConfig(
        corpus=corpus,
        operations=operations,
        detectors=detectors,
        seed=seed,
        threshold=threshold,
        aggregation=aggregation,
        per_family=bool(doc.get("per_family", False)),
        workers=workers,
        cache_dir=base_dir / str(cache_dir),
        output_dir=base_dir / str(output_dir),
        series=series,
        source=doc,
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return parse_config(doc, path.parent.resolve())
