"""Exception hierarchy shared across the harness."""


class BenchError(Exception):
    """Base class for all harness errors."""


class ConfigError(BenchError):
    """Experiment configuration is malformed or inconsistent."""


class ManifestError(BenchError):
    """Corpus manifest cannot be parsed or violates its invariants."""


class ImageError(BenchError):
    """A frame file cannot be read or is not an 8-bit RGB image."""


class JpegError(ImageError):
    """Malformed or unsupported JPEG stream."""


class PipelineError(BenchError):
    """Pipeline string cannot be parsed, or a stage failed to apply.

    Carries the offending stage so callers can point at the exact
    position in the pipeline string.
    """

    def __init__(self, message, stage=None, operator=None):
        if stage is not None:
            prefix = f"stage {stage}"
            if operator:
                prefix += f" ({operator})"
            message = f"{prefix}: {message}"
        super().__init__(message)
        self.stage = stage
        self.operator = operator


class ExternalOpError(BenchError):
    """External command failed, timed out, or broke the directory contract."""

    def __init__(self, message, missing=(), extra=(), diagnostics=""):
        detail = message
        if missing:
            detail += " missing: " + ", ".join(sorted(missing))
        if extra:
            detail += " extra: " + ", ".join(sorted(extra))
        super().__init__(detail)
        self.missing = tuple(sorted(missing))
        self.extra = tuple(sorted(extra))
        self.diagnostics = diagnostics


class DetectorError(BenchError):
    """Detector subprocess failed or violated the batch scoring protocol."""


class MetricsError(BenchError):
    """Metric computation is impossible on the given inputs."""


class ReportError(BenchError):
    """Report rendering failed (unknown category, missing series row, ...)."""
