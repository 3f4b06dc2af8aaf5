"""``bench`` command line: validate, perturb, score, evaluate, run.

Exit codes: 0 success, 1 configuration/corpus error, 2 stage failure
(operator, external command, or detector).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import CACHE_ENV_VAR, load_config
from .corpus import load_manifest, validate_corpus, write_manifest
from .detector import DetectorSpec, run_detector, score_batch_file
from .errors import (
    BenchError,
    ConfigError,
    DetectorError,
    ExternalOpError,
    ImageError,
    ManifestError,
    MetricsError,
    PipelineError,
    ReportError,
)
from .metrics import LabeledScore, evaluate_run
from .report import build_table, emit_quality_series, emit_report, series_csv

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_STAGE = 2

_CONFIG_ERRORS = (ConfigError, ManifestError)
_STAGE_ERRORS = (
    PipelineError,
    ExternalOpError,
    DetectorError,
    ImageError,
    MetricsError,
    ReportError,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Measure how benign processing degrades deepfake detectors.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("validate", help="check a corpus manifest and its frames")
    p.add_argument("--manifest", required=True)
    p.add_argument("--root", required=True)

    p = sub.add_parser("perturb", help="apply a pipeline to every frame of a corpus")
    p.add_argument("--manifest", required=True)
    p.add_argument("--root", required=True)
    p.add_argument("--ops", required=True, help='pipeline, e.g. "gnoise:var=0.01|gblur:ks=5"')
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=4)

    p = sub.add_parser("score", help="score corpus frames with a detector command")
    p.add_argument("--manifest", required=True)
    p.add_argument("--root", required=True)
    p.add_argument("--command", required=True, help="template with {batch_file}")
    p.add_argument("--name", default="detector")
    p.add_argument("--timeout", type=float, default=600.0)
    p.add_argument("--out", required=True, help="output scores JSONL")

    p = sub.add_parser("evaluate", help="recompute reports from persisted scores")
    p.add_argument("--config", required=True)
    p.add_argument("--scores-dir", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("run", help="full experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override config seed")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--cache-dir", default=None, help=f"default ${CACHE_ENV_VAR} or config")
    p.add_argument("--out", default=None, help="override output directory")

    p = sub.add_parser("mock-detector", help="built-in deterministic detector (protocol server)")
    p.add_argument("--batch", required=True)

    p = sub.add_parser("demo", help="write the bundled demo corpus and config")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=42)

    return parser


def _cmd_validate(args) -> int:
    entries = load_manifest(args.manifest)
    report = validate_corpus(entries, args.root)
    print(report.summary())
    return EXIT_OK if report.usable else EXIT_CONFIG


def _cmd_perturb(args) -> int:
    from concurrent.futures import ThreadPoolExecutor

    from .corpus import load_frame
    from .image import write_png
    from .operators import apply_pipeline, parse_pipeline

    spec = parse_pipeline(args.ops)
    entries = load_manifest(args.manifest)
    out_dir = Path(args.out)
    frames_dir = out_dir / "frames"
    frames_dir.mkdir(parents=True, exist_ok=True)

    def work(entry):
        img = load_frame(entry, args.root)
        out = apply_pipeline(spec, img, args.seed, entry.frame_id)
        rel = f"frames/{entry.frame_id}.png"
        write_png(out, out_dir / rel)
        return replace(entry, path=rel)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rewritten = list(pool.map(work, entries))
    write_manifest(rewritten, out_dir / "manifest.csv")
    print(f"perturbed {len(rewritten)} frames -> {out_dir}")
    return EXIT_OK


def _cmd_score(args) -> int:
    entries = load_manifest(args.manifest)
    spec = DetectorSpec(name=args.name, command_template=args.command, timeout=args.timeout)
    root = Path(args.root)
    batch = [(e.frame_id, root / e.path) for e in entries]
    records = run_detector(spec, batch)
    by_id = {e.frame_id: e for e in entries}
    with open(args.out, "w", encoding="utf-8") as fh:
        for record in records:
            entry = by_id[record.frame_id]
            fh.write(
                json.dumps(
                    {
                        "frame_id": record.frame_id,
                        "label": entry.label,
                        "score": record.score,
                        "family": entry.family,
                        "video_id": entry.video_id,
                    }
                )
                + "\n"
            )
    print(f"scored {len(records)} frames -> {args.out}")
    return EXIT_OK


def _read_scores(path) -> tuple[list[LabeledScore], dict[str, str]]:
    """Parse persisted scores; also returns the frame->video mapping
    (empty when the file predates the video_id field)."""
    scores = []
    video_of: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                scores.append(
                    LabeledScore(
                        frame_id=obj["frame_id"],
                        label=obj["label"],
                        score=float(obj["score"]),
                        family=obj.get("family"),
                    )
                )
                if obj.get("video_id"):
                    video_of[obj["frame_id"]] = obj["video_id"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MetricsError(f"{path}:{line_no}: bad score record: {exc}") from None
    return scores, video_of


def _cmd_evaluate(args) -> int:
    config = load_config(args.config)
    scores_dir = Path(args.scores_dir)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    categories = {op.label: op.category for op in config.operations}
    pipelines = {op.label: op.describe() for op in config.operations}
    multi = len(config.detectors) > 1
    for detector in config.detectors:
        scores_by_op = {}
        for op in config.operations:
            candidates = (
                scores_dir / f"{op.label}__{detector.name}.jsonl",
                scores_dir / f"{op.label}.jsonl",
            )
            path = next((c for c in candidates if c.is_file()), None)
            if path is None:
                print(f"note: no scores for operation {op.label!r}, row skipped", file=sys.stderr)
                continue
            scores, video_of = _read_scores(path)
            if config.aggregation == "video":
                from .metrics import aggregate_by_video

                scores = aggregate_by_video(scores, video_of)
            scores_by_op[op.label] = scores
        report = evaluate_run(
            scores_by_op,
            threshold=config.threshold,
            categories=categories,
            pipelines=pipelines,
            per_family=config.per_family,
        )
        report.metadata = {"detector": detector.name, "threshold": config.threshold}
        suffix = f"_{detector.name}" if multi else ""
        table = build_table(report, grouping="by_category")
        for fmt, ext in (("csv", "csv"), ("markdown", "md"), ("json", "json")):
            (out_dir / f"report{suffix}.{ext}").write_bytes(emit_report(table, fmt))
        for family, points in config.series.items():
            present = [p for p in points if p[0] in report.labels]
            if present:
                series = emit_quality_series(report, present, family=family)
                (out_dir / f"series_{family}{suffix}.csv").write_bytes(series_csv(series))
        print(f"evaluated {len(report.rows)} operations -> {out_dir}")
    return EXIT_OK


def _cmd_run(args) -> int:
    from .runner import run_experiment

    config = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        config = replace(config, seed=args.seed)
        overrides["seed"] = args.seed
    if args.workers is not None:
        config = replace(config, workers=args.workers)
        overrides["workers"] = args.workers
    if args.cache_dir:  # config.py already falls back to $BENCH_CACHE_DIR
        config = replace(config, cache_dir=Path(args.cache_dir))
        overrides["cache_dir"] = args.cache_dir
    if args.out:
        config = replace(config, output_dir=Path(args.out))
        overrides["output_dir"] = args.out
    if overrides and config.source is not None:
        # keep the run directory's config copy in sync with what actually ran
        config.source = {**config.source, **overrides}
    reports = run_experiment(config)
    for name, report in reports.items():
        table = build_table(report, grouping="by_category")
        print(f"== {name} ==")
        print(emit_report(table, "markdown").decode("utf-8"))
    print(f"artifacts in {config.output_dir}")
    return EXIT_OK


def _cmd_mock_detector(args) -> int:
    for line in score_batch_file(args.batch):
        print(line)
    return EXIT_OK


def _cmd_demo(args) -> int:
    from .synth import write_demo

    config_path = write_demo(args.out, seed=args.seed)
    print(f"demo corpus ready; run: bench run --config {config_path}")
    return EXIT_OK


_HANDLERS = {
    "validate": _cmd_validate,
    "perturb": _cmd_perturb,
    "score": _cmd_score,
    "evaluate": _cmd_evaluate,
    "run": _cmd_run,
    "mock-detector": _cmd_mock_detector,
    "demo": _cmd_demo,
}


def main(argv=None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr
    )
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.subcommand](args)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _STAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except BenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
