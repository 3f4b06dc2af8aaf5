"""Apply every conventional perturbation to one frame and eyeball the damage.

Writes a PNG per operator into demo_output/gallery/ and prints how far
each result drifted from the original (PSNR, plus the mock detector's
score so you can see which operators move it).
"""

from pathlib import Path

from benignbench import mock_score, parse_pipeline, apply_pipeline, psnr, write_png
from benignbench.config import CONVENTIONAL_SUITE
from benignbench.synth import build_demo_corpus
from benignbench.corpus import load_manifest, load_frame

out_dir = Path("demo_output/gallery")
out_dir.mkdir(parents=True, exist_ok=True)

# grab one textured "fake" frame from the synthetic corpus
corpus_dir = Path("demo_output/corpus")
manifest = build_demo_corpus(corpus_dir, seed=42)
entries = load_manifest(manifest)
frame = load_frame(next(e for e in entries if e.label == "fake"), corpus_dir)
write_png(frame, out_dir / "original.png")

print(f"{'operation':<12} {'pipeline':<36} {'psnr':>8}  score")
print(f"{'original':<12} {'-':<36} {'inf':>8}  {mock_score(frame):.3f}")
for label, _, pipeline in CONVENTIONAL_SUITE:
    if label == "raw":
        continue
    spec = parse_pipeline(pipeline)
    result = apply_pipeline(spec, frame, seed=42, frame_id="gallery")
    write_png(result, out_dir / f"{label}.png")
    if result.shape == frame.shape:
        quality = f"{psnr(frame, result):8.2f}"
    else:
        quality = f"{'resized':>8}"
    print(f"{label:<12} {pipeline:<36} {quality}  {mock_score(result):.3f}")

print(f"\nimages in {out_dir}/")
