"""Experiment orchestration: perturb (cached) -> score -> evaluate -> report.

Perturbed frames are content-addressed in a cache directory, so reruns
and overlapping configs never recompute work. A frame's cache key
covers everything that can change its bytes: the canonical pipeline
string, the frame id, the master seed, the operation label, and the
source file's content hash. External operations are keyed per batch
(a video codec output depends on the whole sequence).

Per-operation failures are recorded and skip that row; a detector
failure aborts the run, since scores from a half-failed detector are
not comparable across operations.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import shutil
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import ExperimentConfig, OperationConfig
from .corpus import (
    ManifestEntry,
    content_digest,
    load_frame,
    load_manifest,
    select_frames,
    validate_corpus,
)
from .detector import DetectorSpec, run_detector
from .errors import BenchError, ManifestError
from .external import run_external_operator, video_roundtrip
from .image import write_png
from .metrics import (
    BASELINE_LABEL,
    EvalReport,
    LabeledScore,
    aggregate_by_video,
    evaluate_run,
)
from .operators import apply_pipeline, parse_pipeline
from .report import build_table, emit_quality_series, emit_report, series_csv

logger = logging.getLogger("benignbench")

_MASK64 = (1 << 64) - 1


def _hash_parts(*parts: str) -> str:
    h = hashlib.sha256()
    for part in parts:
        data = part.encode("utf-8")
        h.update(len(data).to_bytes(4, "big"))
        h.update(data)
    return h.hexdigest()


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def cache_key(frame_id: str, pipeline: str, seed: int, op_label: str, content_hash: str) -> str:
    """Digest naming one perturbed frame in the cache."""
    return _hash_parts(frame_id, pipeline, str(seed & _MASK64), op_label, content_hash)


def _atomic_write_png(img, dst: Path) -> None:
    tmp = dst.with_name(f".{dst.name}.{os.getpid()}.{threading.get_ident()}.tmp")
    write_png(img, tmp)
    os.replace(tmp, dst)


def _safe_name(index: int, frame_id: str) -> str:
    safe = re.sub(r"[^A-Za-z0-9._-]", "_", frame_id)
    return f"{index:04d}_{safe}.png"


class StageFailure(BenchError):
    """Wraps a per-operation failure so the run can continue."""


class Runner:
    def __init__(self, config: ExperimentConfig, workers: int | None = None):
        self.config = config
        self.workers = workers or config.workers
        self.cache_dir = Path(config.cache_dir)
        self.out_dir = Path(config.output_dir)

    # -- corpus ------------------------------------------------------------

    def prepare_corpus(self) -> list[ManifestEntry]:
        cfg = self.config
        entries = load_manifest(cfg.corpus.manifest)
        report = validate_corpus(entries, cfg.corpus.root)
        for issue in report.issues:
            level = logging.ERROR if issue.fatal else logging.WARNING
            logger.log(level, "corpus issue [%s] %s: %s", issue.kind, issue.frame_id, issue.detail)
        if not report.usable:
            raise ManifestError("corpus validation failed:\n" + report.summary())
        selected = select_frames(entries, cfg.corpus.n_per_video)
        logger.info(
            "corpus: %d frames selected (of %d) from %s",
            len(selected),
            len(entries),
            cfg.corpus.manifest,
        )
        if not selected:
            raise ManifestError("no frames selected from corpus")
        return selected

    # -- perturbation ------------------------------------------------------

    def materialize(self, op: OperationConfig, entries) -> dict[str, Path]:
        """Produce the operation's perturbed frame files, cache-aware.

        Returns frame_id -> path of an 8-bit PNG in the cache.
        """
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        if op.pipeline is not None:
            return self._materialize_pipeline(op, entries)
        if op.external is not None:
            return self._materialize_external(op, entries)
        return self._materialize_video(op, entries)

    def _materialize_pipeline(self, op, entries) -> dict[str, Path]:
        cfg = self.config
        spec = parse_pipeline(op.pipeline)
        canonical = spec.to_string()
        root = Path(cfg.corpus.root)

        def work(entry: ManifestEntry) -> tuple[str, Path]:
            src = root / entry.path
            digest = cache_key(
                entry.frame_id, canonical, cfg.seed, op.label, file_sha256(src)
            )
            dst = self.cache_dir / f"{digest}.png"
            if not dst.is_file():
                img = load_frame(entry, root)
                out = apply_pipeline(spec, img, cfg.seed, entry.frame_id)
                _atomic_write_png(out, dst)
            return entry.frame_id, dst

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            produced = list(pool.map(work, entries))
        return dict(produced)

    def _batch_digest(self, op: OperationConfig, entries, extra: str) -> str:
        root = Path(self.config.corpus.root)
        parts = [op.label, extra]
        for e in entries:
            parts.append(e.frame_id)
            parts.append(file_sha256(root / e.path))
        return _hash_parts(*parts)

    def _cached_batch(self, batch_digest: str, entries) -> dict[str, Path] | None:
        mapping = {
            e.frame_id: self.cache_dir / f"{_hash_parts(batch_digest, e.frame_id)}.png"
            for e in entries
        }
        if all(p.is_file() for p in mapping.values()):
            return mapping
        return None

    def _store_batch(self, batch_digest: str, produced: dict[str, Path]) -> dict[str, Path]:
        mapping = {}
        for frame_id, src in produced.items():
            dst = self.cache_dir / f"{_hash_parts(batch_digest, frame_id)}.png"
            tmp = dst.with_name(f".{dst.name}.{os.getpid()}.tmp")
            shutil.copyfile(src, tmp)
            os.replace(tmp, dst)
            mapping[frame_id] = dst
        return mapping

    def _materialize_external(self, op, entries) -> dict[str, Path]:
        spec = op.external
        extra = f"{spec.command_template}|{spec.params!r}"
        batch_digest = self._batch_digest(op, entries, extra)
        cached = self._cached_batch(batch_digest, entries)
        if cached is not None:
            return cached
        root = Path(self.config.corpus.root)
        with tempfile.TemporaryDirectory(prefix=f"bench-{op.label}-") as tmp:
            in_dir = Path(tmp) / "in"
            out_dir = Path(tmp) / "out"
            in_dir.mkdir()
            names = {}
            for i, e in enumerate(entries):
                name = _safe_name(i, e.frame_id)
                shutil.copyfile(root / e.path, in_dir / name)
                names[e.frame_id] = name
            started = time.monotonic()
            run_external_operator(spec, in_dir, out_dir)
            logger.info(
                "external op %s finished in %.1fs", op.label, time.monotonic() - started
            )
            produced = {fid: out_dir / name for fid, name in names.items()}
            return self._store_batch(batch_digest, produced)

    def _materialize_video(self, op, entries) -> dict[str, Path]:
        video_cfg = op.video
        spec = video_cfg.spec
        extra = (
            f"{spec.codec}|{spec.crf}|{spec.fps}"
            f"|{video_cfg.encode_template}|{video_cfg.decode_template}"
        )
        by_video: dict[str, list[ManifestEntry]] = {}
        for e in entries:
            by_video.setdefault(e.video_id, []).append(e)
        root = Path(self.config.corpus.root)
        mapping: dict[str, Path] = {}
        for video_id, group in by_video.items():
            ordered = sorted(group, key=lambda e: e.frame_index)
            batch_digest = self._batch_digest(op, ordered, extra)
            cached = self._cached_batch(batch_digest, ordered)
            if cached is not None:
                mapping.update(cached)
                continue
            with tempfile.TemporaryDirectory(prefix=f"bench-{op.label}-") as tmp:
                started = time.monotonic()
                frames = [root / e.path for e in ordered]
                decoded = video_roundtrip(
                    frames,
                    spec,
                    Path(tmp) / "decoded",
                    encode_template=video_cfg.encode_template,
                    decode_template=video_cfg.decode_template,
                    timeout=video_cfg.timeout,
                )
                logger.info(
                    "video op %s (%s) finished in %.1fs",
                    op.label,
                    video_id,
                    time.monotonic() - started,
                )
                produced = {e.frame_id: p for e, p in zip(ordered, decoded)}
                mapping.update(self._store_batch(batch_digest, produced))
        return mapping

    # -- scoring and evaluation ---------------------------------------------

    def score(
        self, detector: DetectorSpec, entries, frames: dict[str, Path]
    ) -> list[LabeledScore]:
        batch = [(e.frame_id, frames[e.frame_id]) for e in entries]
        records = run_detector(detector, batch)
        by_id = {e.frame_id: e for e in entries}
        return [
            LabeledScore(
                frame_id=r.frame_id,
                label=by_id[r.frame_id].label,
                score=r.score,
                family=by_id[r.frame_id].family,
            )
            for r in records
        ]

    def run(self) -> dict[str, EvalReport]:
        """Execute the full experiment; returns one EvalReport per detector."""
        self.out_dir.mkdir(parents=True, exist_ok=True)
        log_handler = logging.FileHandler(self.out_dir / "run.log", mode="w")
        log_handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)s %(message)s")
        )
        logger.addHandler(log_handler)
        try:
            return self._run_inner()
        finally:
            logger.removeHandler(log_handler)
            log_handler.close()

    def _run_inner(self) -> dict[str, EvalReport]:
        cfg = self.config
        entries = self.prepare_corpus()
        corpus_hash = content_digest(entries, cfg.corpus.root)
        run_id = _hash_parts(
            json.dumps(cfg.source, sort_keys=True) if cfg.source else "",
            corpus_hash,
            str(cfg.seed),
        )[:12]
        logger.info("run %s: seed=%d frames=%d", run_id, cfg.seed, len(entries))

        if cfg.source is not None:
            (self.out_dir / "config.json").write_text(
                json.dumps(cfg.source, indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )

        materialized: dict[str, dict[str, Path]] = {}
        failures: dict[str, str] = {}
        for op in cfg.operations:
            started = time.monotonic()
            try:
                materialized[op.label] = self.materialize(op, entries)
                logger.info(
                    "operation %s: %d frames ready in %.1fs",
                    op.label,
                    len(materialized[op.label]),
                    time.monotonic() - started,
                )
            except BenchError as exc:
                if op.label == BASELINE_LABEL:
                    raise
                failures[op.label] = str(exc)
                logger.error("operation %s failed, row dropped: %s", op.label, exc)

        scores_dir = self.out_dir / "scores"
        scores_dir.mkdir(exist_ok=True)
        video_of = {e.frame_id: e.video_id for e in entries}
        categories = {op.label: op.category for op in cfg.operations}
        pipelines = {op.label: op.describe() for op in cfg.operations}

        reports: dict[str, EvalReport] = {}
        for detector in cfg.detectors:
            scores_by_op: dict[str, list[LabeledScore]] = {}
            for op in cfg.operations:
                if op.label not in materialized:
                    continue
                labeled = self.score(detector, entries, materialized[op.label])
                self._persist_scores(scores_dir, op.label, detector.name, labeled, video_of)
                if cfg.aggregation == "video":
                    labeled = aggregate_by_video(labeled, video_of)
                scores_by_op[op.label] = labeled
            report = evaluate_run(
                scores_by_op,
                threshold=cfg.threshold,
                categories=categories,
                pipelines=pipelines,
                per_family=cfg.per_family,
            )
            report.metadata = {
                "run_id": run_id,
                "seed": cfg.seed,
                "detector": detector.name,
                "corpus_digest": corpus_hash,
                "timestamp": datetime.now(timezone.utc).isoformat(),
                "harness_version": __version__,
                "threshold": cfg.threshold,
                "aggregation": cfg.aggregation,
                "n_frames": len(entries),
                "failed_operations": dict(sorted(failures.items())),
            }
            self._emit_artifacts(report, detector.name, len(cfg.detectors) > 1)
            reports[detector.name] = report
        return reports

    def _persist_scores(self, scores_dir: Path, op_label, detector_name, labeled, video_of):
        path = scores_dir / f"{op_label}__{detector_name}.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            for s in labeled:
                fh.write(
                    json.dumps(
                        {
                            "frame_id": s.frame_id,
                            "label": s.label,
                            "score": s.score,
                            "family": s.family,
                            "video_id": video_of.get(s.frame_id),
                        }
                    )
                    + "\n"
                )

    def _emit_artifacts(self, report: EvalReport, detector_name: str, multi: bool):
        suffix = f"_{detector_name}" if multi else ""
        table = build_table(report, grouping="by_category")
        for fmt, ext in (("csv", "csv"), ("markdown", "md"), ("json", "json")):
            path = self.out_dir / f"report{suffix}.{ext}"
            path.write_bytes(emit_report(table, fmt))
            logger.info("wrote %s", path)
        for family, points in self.config.series.items():
            series = emit_quality_series(report, points, family=family)
            path = self.out_dir / f"series_{family}{suffix}.csv"
            path.write_bytes(series_csv(series))
            logger.info("wrote %s", path)


def run_experiment(config: ExperimentConfig, workers: int | None = None):
    """One-call experiment execution; returns {detector name: EvalReport}."""
    return Runner(config, workers=workers).run()
