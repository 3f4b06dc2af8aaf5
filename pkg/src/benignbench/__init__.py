"""benignbench: how much do benign image/video edits hurt a deepfake detector?

The harness perturbs a labeled frame corpus with conventional
operators (JPEG, blurs, noise, gamma, resize) or external commands
(video codecs, learned codecs, super-resolution), scores every variant
with any black-box detector speaking a simple JSONL batch protocol,
and reports accuracy/AUC/EER/F1 degradation against the unprocessed
baseline.
"""

__version__ = "0.1.0"

from .corpus import (
    ManifestEntry,
    ValidationReport,
    load_frame,
    load_manifest,
    select_frames,
    validate_corpus,
    write_manifest,
)
from .detector import DetectorSpec, ScoreRecord, mock_score, run_detector
from .errors import (
    BenchError,
    ConfigError,
    DetectorError,
    ExternalOpError,
    ImageError,
    JpegError,
    ManifestError,
    MetricsError,
    PipelineError,
    ReportError,
)
from .external import ExternalOpSpec, VideoCodecSpec, run_external_operator, video_roundtrip
from .image import psnr, read_png, write_png
from .metrics import (
    EvalReport,
    LabeledScore,
    MetricRow,
    RocCurve,
    auc,
    eer,
    evaluate_run,
    metric_row,
    roc_curve,
    threshold_metrics,
)
from .operators import (
    OperatorSpec,
    PipelineSpec,
    add_gaussian_noise,
    apply_pipeline,
    gamma_correct,
    gaussian_blur,
    jpeg_transcode,
    mean_blur,
    median_blur,
    parse_pipeline,
    resize_bilinear,
)
from .report import SeriesData, build_table, emit_quality_series, emit_report
from .runner import cache_key, run_experiment

__all__ = [
    "__version__",
    "ManifestEntry",
    "ValidationReport",
    "load_frame",
    "load_manifest",
    "select_frames",
    "validate_corpus",
    "write_manifest",
    "DetectorSpec",
    "ScoreRecord",
    "mock_score",
    "run_detector",
    "BenchError",
    "ConfigError",
    "DetectorError",
    "ExternalOpError",
    "ImageError",
    "JpegError",
    "ManifestError",
    "MetricsError",
    "PipelineError",
    "ReportError",
    "ExternalOpSpec",
    "VideoCodecSpec",
    "run_external_operator",
    "video_roundtrip",
    "psnr",
    "read_png",
    "write_png",
    "EvalReport",
    "LabeledScore",
    "MetricRow",
    "RocCurve",
    "auc",
    "eer",
    "evaluate_run",
    "metric_row",
    "roc_curve",
    "threshold_metrics",
    "OperatorSpec",
    "PipelineSpec",
    "add_gaussian_noise",
    "apply_pipeline",
    "gamma_correct",
    "gaussian_blur",
    "jpeg_transcode",
    "mean_blur",
    "median_blur",
    "parse_pipeline",
    "resize_bilinear",
    "SeriesData",
    "build_table",
    "emit_quality_series",
    "emit_report",
    "cache_key",
    "run_experiment",
]
