"""Detection accuracy versus JPEG quality factor, plus codec distortion.

Sweeps a denser quality grid than the standard suite and emits the
plot-ready series CSV; if matplotlib is importable the curve is also
rendered with the raw-accuracy reference line.
"""

import json
from pathlib import Path

from benignbench.config import load_config
from benignbench.report import emit_quality_series, series_csv
from benignbench.runner import run_experiment
from benignbench.synth import build_demo_corpus, demo_config_doc

work = Path("demo_output/jpeg_sweep")
build_demo_corpus(work, seed=42)

qualities = [30, 50, 70, 85, 95]
operations = [{"label": "raw", "category": "Raw", "pipeline": "identity"}] + [
    {"label": f"jpeg{q}", "category": "Image Transcoding", "pipeline": f"jpeg:quality={q}"}
    for q in qualities
]
doc = demo_config_doc(seed=42)
doc["operations"] = operations
doc["series"] = {"jpeg": [[f"jpeg{q}", q] for q in qualities]}
(work / "config.json").write_text(json.dumps(doc, indent=2))

report = run_experiment(load_config(work / "config.json"))["mock"]
series = emit_quality_series(report, [(f"jpeg{q}", q) for q in qualities], family="jpeg")

print("quality  accuracy   (raw reference: %.2f%%)" % series.raw_accuracy)
for x, accuracy in series.points:
    bar = "#" * int(accuracy / 2.5)
    print(f"{x:7.0f}  {accuracy:7.2f}%  {bar}")

csv_path = work / "sweep.csv"
csv_path.write_bytes(series_csv(series))
print(f"\nseries CSV: {csv_path}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [p[0] for p in series.points]
    ys = [p[1] for p in series.points]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(xs, ys, marker="o", label="JPEG")
    ax.axhline(series.raw_accuracy, linestyle="--", color="gray", label="raw")
    ax.set_xlabel("JPEG quality factor")
    ax.set_ylabel("detection accuracy (%)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(work / "sweep.png", dpi=120)
    print(f"plot: {work / 'sweep.png'}")
except ImportError:
    pass
