"""Wrapping an external tool: the directory contract and video round trips.

External operators (learned codecs, super-resolution, ffmpeg) are any
command reading PNGs from {in_dir} and writing the same filenames to
{out_dir}. This demo wraps a three-line "codec" stub; swap in your
research repository's entry point the same way. The toy video codec
shows the assemble/encode/decode round trip and its CRF-controlled
distortion without needing ffmpeg installed.
"""

import sys
import textwrap
from pathlib import Path

import numpy as np

from benignbench import ExternalOpSpec, VideoCodecSpec, psnr, read_png, run_external_operator, video_roundtrip
from benignbench.synth import build_demo_corpus
from benignbench.corpus import load_manifest

work = Path("demo_output/external")
build_demo_corpus(work / "corpus", seed=42)
entries = load_manifest(work / "corpus" / "manifest.csv")
frames = [work / "corpus" / e.path for e in entries if e.video_id == "deepfake_000"]

# --- generic external operator: a stub that just copies frames -------------
stage_in = work / "stage_in"
stage_in.mkdir(parents=True, exist_ok=True)
for p in frames:
    (stage_in / p.name).write_bytes(p.read_bytes())

stub = work / "identity_codec.py"
stub.write_text(textwrap.dedent("""\
    import shutil, sys
    from pathlib import Path
    src, dst = Path(sys.argv[1]), Path(sys.argv[2])
    for p in sorted(src.iterdir()):
        shutil.copyfile(p, dst / p.name)
"""))
spec = ExternalOpSpec(
    name="identity-codec",
    command_template=f"{sys.executable} {stub} {{in_dir}} {{out_dir}}",
)
outputs = run_external_operator(spec, stage_in, work / "stage_out")
print(f"external op produced {len(outputs)} frames, filename contract held")

# --- video round trip through a toy CRF codec ------------------------------
codec = work / "toy_video_codec.py"
codec.write_text(textwrap.dedent("""\
    import sys
    import numpy as np
    from PIL import Image
    from pathlib import Path
    mode = sys.argv[1]
    if mode == "encode":
        in_dir, archive, crf = sys.argv[2], sys.argv[3], int(sys.argv[4])
        step = 1 + 4 * crf   # coarser quantization at higher CRF
        frames = {}
        for p in sorted(Path(in_dir).iterdir()):
            arr = np.asarray(Image.open(p), dtype=np.int32)
            frames[p.name] = ((arr // step) * step + step // 2).clip(0, 255).astype(np.uint8)
        np.savez(archive, **frames)
    else:
        archive, out_dir = sys.argv[2], sys.argv[3]
        data = np.load(archive + ".npz" if not archive.endswith(".npz") else archive)
        for i, name in enumerate(sorted(data.files)):
            Image.fromarray(data[name]).save(Path(out_dir) / f"{i + 1:06d}.png")
"""))
encode_tpl = f"{sys.executable} {codec} encode {{in_dir}} {{tmp}}.npz {{crf}}"
decode_tpl = f"{sys.executable} {codec} decode {{tmp}}.npz {{out_dir}}"

for crf in (23, 40):
    decoded = video_roundtrip(
        frames,
        VideoCodecSpec("h264", crf),
        work / f"decoded_crf{crf}",
        encode_template=encode_tpl,
        decode_template=decode_tpl,
    )
    quality = np.mean([psnr(read_png(a), read_png(b)) for a, b in zip(frames, decoded)])
    print(f"crf={crf}: {len(decoded)} frames back, mean PSNR {quality:.2f} dB")

print("\nfor real video codecs install ffmpeg and use the default templates")
