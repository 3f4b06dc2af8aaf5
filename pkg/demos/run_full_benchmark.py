"""The whole pipeline in one script: corpus -> perturb -> score -> report.

Builds the synthetic 20-frame corpus, runs the full conventional
operation suite against the built-in mock detector, and prints the
degradation table. Everything lands in demo_output/benchmark/.
"""

import json
from pathlib import Path

from benignbench.config import load_config
from benignbench.report import build_table, emit_report
from benignbench.runner import run_experiment
from benignbench.synth import build_demo_corpus, demo_config_doc

work = Path("demo_output/benchmark")
build_demo_corpus(work, seed=42)

doc = demo_config_doc(seed=42)
doc["per_family"] = True  # adds per-manipulation-family metrics to report.json
(work / "config.json").write_text(json.dumps(doc, indent=2))

reports = run_experiment(load_config(work / "config.json"))
report = reports["mock"]

print()
print(emit_report(build_table(report, "by_category"), "markdown").decode())
print("run metadata:")
for key in ("run_id", "seed", "corpus_digest", "n_frames"):
    print(f"  {key}: {report.metadata[key]}")
print(f"\nartifacts: {work / 'run'}/  (report.csv/md/json, series_jpeg.csv, scores/, run.log)")
