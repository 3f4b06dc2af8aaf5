"""External command contract: directory bijection, decodability, CRF bounds."""

import sys
import textwrap

import numpy as np
import pytest

from benignbench.errors import ExternalOpError
from benignbench.external import (
    ExternalOpSpec,
    VideoCodecSpec,
    run_external_operator,
    video_roundtrip,
)
from benignbench.image import psnr, read_png, write_png


def write_frames(directory, n=4, size=16, seed=0):
    directory.mkdir(parents=True, exist_ok=True)
    rs = np.random.RandomState(seed)
    paths = []
    for i in range(n):
        img = (rs.rand(size, size, 3) * 0.5 + 0.25).astype(np.float32)
        path = directory / f"{i:04d}_frame.png"
        write_png(img, path)
        paths.append(path)
    return paths


def make_stub(tmp_path, name, body):
    script = tmp_path / name
    script.write_text(textwrap.dedent(body))
    return script


COPY_STUB = """\
    import shutil, sys
    from pathlib import Path
    src, dst = Path(sys.argv[1]), Path(sys.argv[2])
    for p in sorted(src.iterdir()):
        shutil.copyfile(p, dst / p.name)
"""

DROP_STUB = """\
    import shutil, sys
    from pathlib import Path
    src, dst = Path(sys.argv[1]), Path(sys.argv[2])
    for i, p in enumerate(sorted(src.iterdir())):
        if i % 2 == 0:
            shutil.copyfile(p, dst / p.name)
"""

# toy "codec": quantizes samples with a step that grows with CRF, so
# distortion is monotone in CRF like a real encoder's
TOY_CODEC = """\
    import json, sys
    import numpy as np
    from PIL import Image
    mode = sys.argv[1]
    if mode == "encode":
        in_dir, archive, crf = sys.argv[2], sys.argv[3], int(sys.argv[4])
        from pathlib import Path
        frames = {}
        step = 1 + 4 * crf
        for p in sorted(Path(in_dir).iterdir()):
            arr = np.asarray(Image.open(p), dtype=np.int32)
            frames[p.name] = (arr // step * step + step // 2).clip(0, 255)
        np.savez(archive, **{k: v.astype(np.uint8) for k, v in frames.items()})
    else:
        archive, out_dir = sys.argv[2], sys.argv[3]
        from pathlib import Path
        data = np.load(archive if archive.endswith(".npz") else archive + ".npz")
        for i, name in enumerate(sorted(data.files)):
            Image.fromarray(data[name]).save(Path(out_dir) / f"{i + 1:06d}.png")
"""


class TestSpecValidation:
    def test_template_needs_both_dirs_once(self):
        with pytest.raises(ExternalOpError, match=r"\{out_dir\}"):
            ExternalOpSpec(name="x", command_template="cmd {in_dir}")
        with pytest.raises(ExternalOpError, match=r"\{in_dir\}"):
            ExternalOpSpec(name="x", command_template="cmd {in_dir} {in_dir} {out_dir}")

    def test_video_spec_bounds(self):
        VideoCodecSpec(codec="h264", crf=23)
        with pytest.raises(ExternalOpError, match="crf"):
            VideoCodecSpec(codec="h264", crf=60)
        with pytest.raises(ExternalOpError, match="codec"):
            VideoCodecSpec(codec="av1", crf=23)
        with pytest.raises(ExternalOpError, match="fps"):
            VideoCodecSpec(codec="h265", crf=28, fps=0)


class TestRunExternalOperator:
    def test_copy_stub_passes(self, tmp_path):
        in_dir = tmp_path / "in"
        originals = write_frames(in_dir)
        stub = make_stub(tmp_path, "copy.py", COPY_STUB)
        spec = ExternalOpSpec(
            name="copy", command_template=f"{sys.executable} {stub} {{in_dir}} {{out_dir}}"
        )
        outputs = run_external_operator(spec, in_dir, tmp_path / "out")
        assert [p.name for p in outputs] == [p.name for p in originals]
        for src, out in zip(originals, outputs):
            assert out.read_bytes() == src.read_bytes()

    def test_dropping_stub_lists_missing_names(self, tmp_path):
        in_dir = tmp_path / "in"
        write_frames(in_dir)
        stub = make_stub(tmp_path, "drop.py", DROP_STUB)
        spec = ExternalOpSpec(
            name="drop", command_template=f"{sys.executable} {stub} {{in_dir}} {{out_dir}}"
        )
        with pytest.raises(ExternalOpError) as err:
            run_external_operator(spec, in_dir, tmp_path / "out")
        assert err.value.missing == ("0001_frame.png", "0003_frame.png")

    def test_extra_files_rejected(self, tmp_path):
        in_dir = tmp_path / "in"
        write_frames(in_dir, n=2)
        stub = make_stub(
            tmp_path,
            "extra.py",
            COPY_STUB
            + "    shutil.copyfile(sorted(src.iterdir())[0], dst / 'bonus.png')\n",
        )
        spec = ExternalOpSpec(
            name="extra", command_template=f"{sys.executable} {stub} {{in_dir}} {{out_dir}}"
        )
        with pytest.raises(ExternalOpError) as err:
            run_external_operator(spec, in_dir, tmp_path / "out")
        assert err.value.extra == ("bonus.png",)

    def test_nonzero_exit_carries_diagnostics(self, tmp_path):
        in_dir = tmp_path / "in"
        write_frames(in_dir, n=1)
        stub = make_stub(
            tmp_path,
            "fail.py",
            """\
            import sys
            print("codec not licensed", file=sys.stderr)
            sys.exit(1)
            """,
        )
        spec = ExternalOpSpec(
            name="fail", command_template=f"{sys.executable} {stub} {{in_dir}} {{out_dir}}"
        )
        with pytest.raises(ExternalOpError, match="exited 1") as err:
            run_external_operator(spec, in_dir, tmp_path / "out")
        assert "codec not licensed" in err.value.diagnostics

    def test_param_slots(self, tmp_path):
        in_dir = tmp_path / "in"
        write_frames(in_dir, n=1)
        stub = make_stub(
            tmp_path,
            "param.py",
            """\
            import shutil, sys
            from pathlib import Path
            assert sys.argv[3] == "low", sys.argv
            src, dst = Path(sys.argv[1]), Path(sys.argv[2])
            for p in src.iterdir():
                shutil.copyfile(p, dst / p.name)
            """,
        )
        spec = ExternalOpSpec(
            name="preset",
            command_template=f"{sys.executable} {stub} {{in_dir}} {{out_dir}} {{param:preset}}",
            params=(("preset", "low"),),
        )
        run_external_operator(spec, in_dir, tmp_path / "out")

    def test_undecodable_output_rejected(self, tmp_path):
        in_dir = tmp_path / "in"
        write_frames(in_dir, n=1)
        stub = make_stub(
            tmp_path,
            "corrupt.py",
            """\
            import sys
            from pathlib import Path
            src, dst = Path(sys.argv[1]), Path(sys.argv[2])
            for p in src.iterdir():
                (dst / p.name).write_bytes(b"not a png")
            """,
        )
        spec = ExternalOpSpec(
            name="corrupt", command_template=f"{sys.executable} {stub} {{in_dir}} {{out_dir}}"
        )
        with pytest.raises(Exception, match="decodable"):
            run_external_operator(spec, in_dir, tmp_path / "out")


class TestVideoRoundtrip:
    def _templates(self, tmp_path):
        codec = make_stub(tmp_path, "toy_codec.py", TOY_CODEC)
        encode = f"{sys.executable} {codec} encode {{in_dir}} {{tmp}}.npz {{crf}}"
        decode = f"{sys.executable} {codec} decode {{tmp}}.npz {{out_dir}}"
        return encode, decode

    def test_frame_count_preserved(self, tmp_path):
        frames = write_frames(tmp_path / "frames", n=10)
        encode, decode = self._templates(tmp_path)
        out = video_roundtrip(
            frames,
            VideoCodecSpec("h264", 23),
            tmp_path / "decoded",
            encode_template=encode,
            decode_template=decode,
        )
        assert len(out) == 10
        for p in out:
            read_png(p)

    def test_higher_crf_means_lower_psnr(self, tmp_path):
        frames = write_frames(tmp_path / "frames", n=4)
        encode, decode = self._templates(tmp_path)

        def mean_psnr(crf, out_name):
            decoded = video_roundtrip(
                frames,
                VideoCodecSpec("h264", crf),
                tmp_path / out_name,
                encode_template=encode,
                decode_template=decode,
            )
            values = [psnr(read_png(a), read_png(b)) for a, b in zip(frames, decoded)]
            return float(np.mean(values))

        assert mean_psnr(23, "c23") > mean_psnr(40, "c40")

    def test_crf_out_of_range_before_invocation(self):
        with pytest.raises(ExternalOpError, match="crf"):
            VideoCodecSpec("h264", 60)

    def test_empty_frame_list_rejected(self, tmp_path):
        encode, decode = self._templates(tmp_path)
        with pytest.raises(ExternalOpError, match="at least one"):
            video_roundtrip(
                [], VideoCodecSpec("h264", 23), tmp_path / "out",
                encode_template=encode, decode_template=decode,
            )

    def test_frame_dropping_codec_rejected(self, tmp_path):
        frames = write_frames(tmp_path / "frames", n=4)
        codec = make_stub(
            tmp_path,
            "lossy_count.py",
            TOY_CODEC.replace("for i, name in enumerate(sorted(data.files))",
                              "for i, name in enumerate(sorted(data.files)[:-1])"),
        )
        encode = f"{sys.executable} {codec} encode {{in_dir}} {{tmp}}.npz {{crf}}"
        decode = f"{sys.executable} {codec} decode {{tmp}}.npz {{out_dir}}"
        with pytest.raises(ExternalOpError, match="frame count"):
            video_roundtrip(
                frames, VideoCodecSpec("h265", 28), tmp_path / "decoded",
                encode_template=encode, decode_template=decode,
            )
