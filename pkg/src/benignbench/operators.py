"""Benign perturbation operators and the pipeline composition language.

A pipeline is a '|'-separated chain of stages, each stage an operator
name with optional ``key=value`` parameters:

    gnoise:mean=0,var=0.01|gblur:ks=5

Operators map float [0, 1] RGB buffers to float [0, 1] RGB buffers.
Everything is deterministic: the one stochastic operator (gnoise)
derives its stream from (master seed, frame id, stage index), so
results are independent of scheduling and thread count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import filters, jpeg
from .errors import PipelineError
from .rng import Xoshiro256pp, mix_seed


# ---------------------------------------------------------------------------
# operator implementations
# ---------------------------------------------------------------------------

def identity(img: np.ndarray) -> np.ndarray:
    return img


def gaussian_blur(img: np.ndarray, ks: int) -> np.ndarray:
    """Separable Gaussian blur; sigma follows the kernel-size convention."""
    taps = filters.gaussian_kernel(ks)
    out = filters.convolve_separable(img, taps)
    return np.clip(out, 0.0, 1.0).astype(np.float32)


def mean_blur(img: np.ndarray, ks: int) -> np.ndarray:
    """Separable box filter (uniform taps)."""
    taps = filters.box_kernel(ks)
    out = filters.convolve_separable(img, taps)
    return np.clip(out, 0.0, 1.0).astype(np.float32)


def median_blur(img: np.ndarray, ks: int) -> np.ndarray:
    return filters.median_filter(np.asarray(img, dtype=np.float32), ks)


def add_gaussian_noise(img: np.ndarray, mean: float, var: float, seed: int) -> np.ndarray:
    """Add i.i.d. N(mean, var) per sample in the [0, 1] domain, then clamp.

    ``seed`` selects the noise stream directly; pipeline execution
    derives it from (master seed, frame id, stage index).
    """
    if var < 0:
        raise ValueError(f"noise variance must be >= 0, got {var}")
    if var == 0 and mean == 0:
        return np.asarray(img, dtype=np.float32)
    rng = Xoshiro256pp(seed)
    noise = rng.normals(img.size, mean, float(np.sqrt(var))).reshape(img.shape)
    out = img.astype(np.float64) + noise
    return np.clip(out, 0.0, 1.0).astype(np.float32)


def gamma_correct(img: np.ndarray, g: float) -> np.ndarray:
    """Power-law mapping ``out = in ** g`` (g < 1 brightens, g > 1 darkens)."""
    if g <= 0:
        raise ValueError(f"gamma must be > 0, got {g}")
    out = np.power(img.astype(np.float64), g)
    return np.clip(out, 0.0, 1.0).astype(np.float32)


def resize_bilinear(img: np.ndarray, scale: float) -> np.ndarray:
    """Bilinear resize with half-pixel-center mapping and edge clamping.

    Output size is round(scale * dim) per axis; source coordinates are
    src = (dst + 0.5) / scale - 0.5, so scale 1.0 is an exact copy.
    """
    if scale <= 0:
        raise ValueError(f"scale must be > 0, got {scale}")
    height, width = img.shape[:2]
    out_h = int(np.floor(scale * height + 0.5))
    out_w = int(np.floor(scale * width + 0.5))
    if out_h < 1 or out_w < 1:
        raise ValueError(f"scale {scale} yields degenerate output {out_h}x{out_w}")

    def axis_coords(n_out, n_in):
        src = (np.arange(n_out, dtype=np.float64) + 0.5) / scale - 0.5
        lo = np.floor(src).astype(np.int64)
        frac = src - lo
        return np.clip(lo, 0, n_in - 1), np.clip(lo + 1, 0, n_in - 1), frac

    y0, y1, fy = axis_coords(out_h, height)
    x0, x1, fx = axis_coords(out_w, width)
    work = img.astype(np.float64)
    fx = fx[None, :, None]
    fy = fy[:, None, None]
    top = work[y0][:, x0] * (1 - fx) + work[y0][:, x1] * fx
    bottom = work[y1][:, x0] * (1 - fx) + work[y1][:, x1] * fx
    out = top * (1 - fy) + bottom * fy
    return np.clip(out, 0.0, 1.0).astype(np.float32)


def jpeg_transcode(img: np.ndarray, quality: int) -> np.ndarray:
    """Round trip through the baseline JPEG codec at the given quality."""
    return jpeg.transcode(img, quality)


# ---------------------------------------------------------------------------
# pipeline language
# ---------------------------------------------------------------------------

def _check_odd(ks):
    return ks >= 1 and ks % 2 == 1


@dataclass(frozen=True)
class _Param:
    name: str
    kind: type  # int or float
    required: bool = True
    default: float | int | None = None
    check: Callable[[float], bool] | None = None
    rule: str = ""


@dataclass(frozen=True)
class _OpDef:
    params: tuple
    stochastic: bool = False


OPERATORS: dict[str, _OpDef] = {
    "identity": _OpDef(params=()),
    "jpeg": _OpDef(
        params=(
            _Param("quality", int, check=lambda v: 1 <= v <= 100, rule="in [1, 100]"),
        )
    ),
    "gblur": _OpDef(params=(_Param("ks", int, check=_check_odd, rule="odd and >= 1"),)),
    "meanblur": _OpDef(params=(_Param("ks", int, check=_check_odd, rule="odd and >= 1"),)),
    "medianblur": _OpDef(params=(_Param("ks", int, check=_check_odd, rule="odd and >= 1"),)),
    "gnoise": _OpDef(
        params=(
            _Param("mean", float, required=False, default=0.0),
            _Param("var", float, check=lambda v: v >= 0, rule=">= 0"),
        ),
        stochastic=True,
    ),
    "gamma": _OpDef(params=(_Param("g", float, check=lambda v: v > 0, rule="> 0"),)),
    "resize": _OpDef(params=(_Param("scale", float, check=lambda v: v > 0, rule="> 0"),)),
}


@dataclass(frozen=True)
class OperatorSpec:
    """One parsed pipeline stage: operator name plus typed parameters."""

    name: str
    params: tuple  # sorted (key, value) pairs

    def param(self, key):
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    def to_string(self) -> str:
        if not self.params:
            return self.name
        # serialize in schema order for stable round trips
        order = {p.name: i for i, p in enumerate(OPERATORS[self.name].params)}
        parts = sorted(self.params, key=lambda kv: order.get(kv[0], 99))
        rendered = ",".join(f"{k}={_format_value(v)}" for k, v in parts)
        return f"{self.name}:{rendered}"


@dataclass(frozen=True)
class PipelineSpec:
    stages: tuple[OperatorSpec, ...]

    def to_string(self) -> str:
        return "|".join(stage.to_string() for stage in self.stages)


def _format_value(value) -> str:
    if isinstance(value, int):
        return str(value)
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def _parse_stage(text: str, index: int) -> OperatorSpec:
    text = text.strip()
    if not text:
        raise PipelineError("empty stage", stage=index)
    name, _, param_text = text.partition(":")
    name = name.strip()
    if name not in OPERATORS:
        known = ", ".join(sorted(OPERATORS))
        raise PipelineError(f"unknown operator {name!r} (known: {known})", stage=index)
    opdef = OPERATORS[name]
    schema = {p.name: p for p in opdef.params}
    values: dict[str, float | int] = {}
    if param_text.strip():
        for chunk in param_text.split(","):
            key, sep, raw = chunk.partition("=")
            key = key.strip()
            raw = raw.strip()
            if not sep or not key or not raw:
                raise PipelineError(
                    f"malformed parameter {chunk.strip()!r}", stage=index, operator=name
                )
            if key not in schema:
                raise PipelineError(
                    f"unknown parameter {key!r}", stage=index, operator=name
                )
            if key in values:
                raise PipelineError(
                    f"duplicate parameter {key!r}", stage=index, operator=name
                )
            param = schema[key]
            try:
                if param.kind is int:
                    value = int(raw)
                else:
                    value = float(raw)
                    if not np.isfinite(value):
                        raise ValueError
            except ValueError:
                raise PipelineError(
                    f"parameter {key}={raw!r} is not a valid {param.kind.__name__}",
                    stage=index,
                    operator=name,
                ) from None
            values[key] = value
    for param in opdef.params:
        if param.name not in values:
            if param.required:
                raise PipelineError(
                    f"missing required parameter {param.name!r}",
                    stage=index,
                    operator=name,
                )
            values[param.name] = param.default
        value = values[param.name]
        if param.check is not None and not param.check(value):
            raise PipelineError(
                f"parameter {param.name}={_format_value(value)} must be {param.rule}",
                stage=index,
                operator=name,
            )
    return OperatorSpec(name=name, params=tuple(sorted(values.items())))


def parse_pipeline(text: str) -> PipelineSpec:
    """Parse a pipeline string; raises PipelineError naming the bad stage."""
    if text is None or not text.strip():
        raise PipelineError("empty pipeline string")
    stages = tuple(
        _parse_stage(chunk, index) for index, chunk in enumerate(text.split("|"))
    )
    return PipelineSpec(stages=stages)


def apply_stage(stage: OperatorSpec, img: np.ndarray, stage_seed: int | None) -> np.ndarray:
    name = stage.name
    if name == "identity":
        return identity(img)
    if name == "jpeg":
        return jpeg_transcode(img, stage.param("quality"))
    if name == "gblur":
        return gaussian_blur(img, stage.param("ks"))
    if name == "meanblur":
        return mean_blur(img, stage.param("ks"))
    if name == "medianblur":
        return median_blur(img, stage.param("ks"))
    if name == "gnoise":
        return add_gaussian_noise(img, stage.param("mean"), stage.param("var"), stage_seed)
    if name == "gamma":
        return gamma_correct(img, stage.param("g"))
    if name == "resize":
        return resize_bilinear(img, stage.param("scale"))
    raise PipelineError(f"no implementation for operator {name!r}")


def apply_pipeline(
    spec: PipelineSpec, img: np.ndarray, seed: int, frame_id: str
) -> np.ndarray:
    """Apply stages left to right.

    Stage i of a stochastic operator draws from a stream seeded by
    mix(seed, frame_id, i), so output is a pure function of
    (spec, img, seed, frame_id).
    """
    out = np.asarray(img, dtype=np.float32)
    for index, stage in enumerate(spec.stages):
        stage_seed = None
        if OPERATORS[stage.name].stochastic:
            stage_seed = mix_seed(seed, frame_id, index)
        try:
            out = apply_stage(stage, out, stage_seed)
        except PipelineError:
            raise
        except (ValueError, MemoryError) as exc:
            raise PipelineError(str(exc), stage=index, operator=stage.name) from exc
    return out
