"""Delegation of non-native perturbations to external commands.

Learned codecs, super-resolution models, and video encoders are not
implemented here; they are invoked through a strict directory
contract: the command reads PNG frames from ``{in_dir}`` and must
leave exactly the same filenames, all decodable, in ``{out_dir}``.
Any research repository can be wrapped with a few lines of shell.

Video round trips additionally assemble the frame sequence into a
clip, encode at a CRF, decode back, and check the frame count
survived.
"""

from __future__ import annotations

import shlex
import shutil
import subprocess
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import ExternalOpError
from .image import read_png

CODEC_LIBS = {"h264": "libx264", "h265": "libx265"}

#: templates a stock ffmpeg install satisfies; any tool with the same
#: placeholders works
DEFAULT_ENCODE_TEMPLATE = (
    "ffmpeg -y -framerate {fps} -i {in_dir}/%06d.png -c:v {codec_lib} "
    "-crf {crf} -pix_fmt yuv420p {tmp}.mp4"
)
DEFAULT_DECODE_TEMPLATE = "ffmpeg -y -i {tmp}.mp4 {out_dir}/%06d.png"


@dataclass(frozen=True)
class ExternalOpSpec:
    """One external frame-set transformation.

    ``command_template`` must contain {in_dir} and {out_dir} exactly
    once each; extra knobs can be spliced via {param:NAME} slots
    filled from ``params``.
    """

    name: str
    command_template: str
    timeout: float = 600.0
    params: tuple = ()  # (key, value) pairs for {param:KEY} slots

    def __post_init__(self):
        for slot in ("{in_dir}", "{out_dir}"):
            count = self.command_template.count(slot)
            if count != 1:
                raise ExternalOpError(
                    f"external op {self.name!r}: template must contain {slot} "
                    f"exactly once, found {count}"
                )


@dataclass(frozen=True)
class VideoCodecSpec:
    codec: str  # h264 | h265
    crf: int
    fps: int = 30

    def __post_init__(self):
        if self.codec not in CODEC_LIBS:
            raise ExternalOpError(f"unknown codec {self.codec!r} (h264/h265)")
        if not 0 <= self.crf <= 51:
            raise ExternalOpError(f"crf must be in [0, 51], got {self.crf}")
        if self.fps < 1:
            raise ExternalOpError(f"fps must be >= 1, got {self.fps}")


@dataclass
class CommandResult:
    argv: list[str]
    returncode: int
    stdout: str
    stderr: str
    duration: float


def _substitute(template: str, mapping: dict[str, str]) -> list[str]:
    tokens = shlex.split(template)
    out = []
    for token in tokens:
        for key, value in mapping.items():
            token = token.replace("{" + key + "}", str(value))
        out.append(token)
    return out


def _run_command(argv: list[str], timeout: float, what: str) -> CommandResult:
    start = time.monotonic()
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        raise ExternalOpError(f"{what} timed out after {timeout}s: {argv}") from None
    except OSError as exc:
        raise ExternalOpError(f"cannot launch {what}: {exc}") from None
    result = CommandResult(
        argv=argv,
        returncode=proc.returncode,
        stdout=proc.stdout,
        stderr=proc.stderr,
        duration=time.monotonic() - start,
    )
    if proc.returncode != 0:
        tail = proc.stderr.strip().splitlines()[-5:]
        raise ExternalOpError(
            f"{what} exited {proc.returncode}",
            diagnostics="\n".join(tail),
        )
    return result


def _check_output_dir(in_dir: Path, out_dir: Path, what: str) -> list[Path]:
    """Enforce the filename bijection and decodability contract."""
    in_names = {p.name for p in in_dir.iterdir() if p.is_file()}
    out_names = {p.name for p in out_dir.iterdir() if p.is_file()}
    missing = in_names - out_names
    extra = out_names - in_names
    if missing or extra:
        raise ExternalOpError(
            f"{what} broke the filename contract.", missing=missing, extra=extra
        )
    outputs = sorted(out_dir / name for name in out_names)
    for path in outputs:
        read_png(path)  # raises ImageError subclass if undecodable
    return outputs


def run_external_operator(spec: ExternalOpSpec, in_dir, out_dir) -> list[Path]:
    """Invoke the command once over a frame directory.

    Returns the validated output frame paths (sorted by name). The
    command's stdout/stderr are attached to the raised error on
    failure; callers log them on success via the returned paths'
    side effects only (the harness logs separately).
    """
    in_dir = Path(in_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mapping = {"in_dir": in_dir, "out_dir": out_dir}
    for key, value in spec.params:
        mapping[f"param:{key}"] = value
    argv = _substitute(spec.command_template, mapping)
    for token in argv:
        if "{in_dir}" in token or "{out_dir}" in token or "{param:" in token:
            raise ExternalOpError(f"unresolved placeholder in command token {token!r}")
    _run_command(argv, spec.timeout, f"external op {spec.name!r}")
    return _check_output_dir(in_dir, out_dir, f"external op {spec.name!r}")


def video_roundtrip(
    frames,
    spec: VideoCodecSpec,
    out_dir,
    encode_template: str = DEFAULT_ENCODE_TEMPLATE,
    decode_template: str = DEFAULT_DECODE_TEMPLATE,
    timeout: float = 600.0,
) -> list[Path]:
    """Assemble ordered frames into a video, transcode, and split back.

    ``frames`` is an ordered list of PNG paths (ascending frame index).
    Decoded frames land in ``out_dir`` as 000001.png, 000002.png, ...
    matching the input order; raises if the transcoder drops or
    invents frames.
    """
    frames = [Path(p) for p in frames]
    if not frames:
        raise ExternalOpError("video round trip needs at least one frame")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory(prefix="bench-video-") as tmp:
        tmp = Path(tmp)
        in_dir = tmp / "in"
        dec_dir = tmp / "out"
        in_dir.mkdir()
        dec_dir.mkdir()
        for i, src in enumerate(frames):
            shutil.copyfile(src, in_dir / f"{i + 1:06d}.png")
        mapping = {
            "in_dir": in_dir,
            "out_dir": dec_dir,
            "fps": spec.fps,
            "crf": spec.crf,
            "codec_lib": CODEC_LIBS[spec.codec],
            "tmp": tmp / "clip",
        }
        what = f"{spec.codec} crf={spec.crf}"
        _run_command(_substitute(encode_template, mapping), timeout, f"encode {what}")
        _run_command(_substitute(decode_template, mapping), timeout, f"decode {what}")
        produced = sorted(p for p in dec_dir.iterdir() if p.is_file())
        if len(produced) != len(frames):
            raise ExternalOpError(
                f"{what}: frame count changed {len(frames)} -> {len(produced)}"
            )
        results = []
        for i, src in enumerate(produced):
            read_png(src)
            dst = out_dir / f"{i + 1:06d}.png"
            shutil.move(str(src), dst)
            results.append(dst)
        return results
