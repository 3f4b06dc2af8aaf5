"""Render evaluation results as degradation tables and sweep series.

Output formats are deterministic byte-for-byte for a given report:
numbers are fixed to two decimals, ordering is config order (optionally
grouped by category), and no timestamps enter the CSV/markdown paths.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .errors import ReportError
from .metrics import BASELINE_LABEL, EvalReport, ReportRow

RAW_CATEGORY = "Raw"

#: canonical category order for grouped tables
CATEGORIES = (
    RAW_CATEGORY,
    "Video Compression",
    "Image Transcoding",
    "Image Smoothing",
    "Additive Noise",
    "Gamma Correction",
    "Combination",
    "Resizing",
    "AI-based Compression",
)

CSV_HEADER = "category,operation,pipeline,accuracy,auc,eer,f1,delta_acc"


@dataclass
class Table:
    rows: list[ReportRow]
    metadata: dict
    has_deltas: bool


def build_table(report: EvalReport, grouping: str = "by_category") -> Table:
    """Order report rows for rendering.

    ``by_category`` groups rows by their declared category in the
    canonical order (stable within a category); ``flat`` keeps config
    order. Unknown categories are an error so typos cannot silently
    drop a row into limbo.
    """
    if grouping not in ("by_category", "flat"):
        raise ReportError(f"unknown grouping {grouping!r}")
    if not report.rows:
        raise ReportError("cannot render an empty report")
    for row in report.rows:
        if row.category not in CATEGORIES:
            raise ReportError(
                f"operation {row.label!r} has unknown category {row.category!r}"
            )
    raw_rows = [r for r in report.rows if r.label == BASELINE_LABEL]
    if len(raw_rows) > 1:
        raise ReportError("more than one raw baseline row")
    rows = list(report.rows)
    if grouping == "by_category":
        order = {name: i for i, name in enumerate(CATEGORIES)}
        rows.sort(key=lambda r: order[r.category])  # stable within categories
    has_deltas = all(r.deltas is not None for r in rows) and bool(raw_rows)
    return Table(rows=rows, metadata=dict(report.metadata), has_deltas=has_deltas)


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def emit_report(table: Table, format: str = "csv") -> bytes:
    """Serialize a table; identical tables produce identical bytes."""
    if format == "csv":
        return _emit_csv(table)
    if format == "markdown":
        return _emit_markdown(table)
    if format == "json":
        return _emit_json(table)
    raise ReportError(f"unknown report format {format!r}")


def _emit_csv(table: Table) -> bytes:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in table.rows:
        delta = _fmt(row.deltas.accuracy) if table.has_deltas and row.deltas else ""
        m = row.metrics
        writer.writerow(
            (
                row.category,
                row.label,
                row.pipeline,
                _fmt(m.accuracy),
                _fmt(m.auc),
                _fmt(m.eer),
                _fmt(m.f1),
                delta,
            )
        )
    return out.getvalue().encode("utf-8")


def _emit_markdown(table: Table) -> bytes:
    out = io.StringIO()
    header = ["Category", "Operation", "Pipeline", "Accuracy", "AUC", "EER", "F1"]
    if table.has_deltas:
        header.append("dAcc")
    out.write("| " + " | ".join(header) + " |\n")
    out.write("|" + "|".join("---" for _ in header) + "|\n")
    for row in table.rows:
        m = row.metrics
        pipeline = row.pipeline.replace("|", "\\|")  # keep table cells intact
        cells = [
            row.category,
            row.label,
            f"`{pipeline}`" if pipeline else "-",
            _fmt(m.accuracy),
            _fmt(m.auc),
            _fmt(m.eer),
            _fmt(m.f1),
        ]
        if table.has_deltas:
            cells.append(_fmt(row.deltas.accuracy) if row.deltas else "")
        out.write("| " + " | ".join(cells) + " |\n")
    return out.getvalue().encode("utf-8")


def _emit_json(table: Table) -> bytes:
    payload = {
        "metadata": table.metadata,
        "rows": [
            {
                "category": row.category,
                "operation": row.label,
                "pipeline": row.pipeline,
                "accuracy": round(row.metrics.accuracy, 2),
                "auc": round(row.metrics.auc, 2),
                "eer": round(row.metrics.eer, 2),
                "f1": round(row.metrics.f1, 2),
                "precision": round(row.metrics.precision, 2),
                "recall": round(row.metrics.recall, 2),
                "counts": {
                    "tp": row.metrics.counts[0],
                    "fp": row.metrics.counts[1],
                    "tn": row.metrics.counts[2],
                    "fn": row.metrics.counts[3],
                },
                "delta_acc": round(row.deltas.accuracy, 2) if row.deltas else None,
                "families": {
                    family: {
                        "accuracy": round(fm.accuracy, 2),
                        "auc": round(fm.auc, 2),
                        "eer": round(fm.eer, 2),
                        "f1": round(fm.f1, 2),
                    }
                    for family, fm in sorted(row.family_metrics.items())
                },
            }
            for row in table.rows
        ],
    }
    return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8")


@dataclass
class SeriesData:
    """Plot-ready (x, accuracy) points for one compression family."""

    family: str
    points: list[tuple[float, float]]  # sorted by x
    raw_accuracy: float | None


def emit_quality_series(report: EvalReport, series, family: str = "") -> SeriesData:
    """Accuracy versus quality knob for the named operations.

    ``series`` is a list of (operation label, x value). The raw row's
    accuracy rides along as the horizontal reference line.
    """
    points = []
    labels = set(report.labels)
    for label, x in series:
        if label not in labels:
            raise ReportError(f"series references unknown operation {label!r}")
        points.append((float(x), report.row(label).metrics.accuracy))
    points.sort(key=lambda p: p[0])
    raw_accuracy = None
    if BASELINE_LABEL in labels:
        raw_accuracy = report.row(BASELINE_LABEL).metrics.accuracy
    return SeriesData(family=family, points=points, raw_accuracy=raw_accuracy)


def series_csv(series: SeriesData) -> bytes:
    out = io.StringIO()
    out.write("x,accuracy,raw_accuracy\n")
    raw = _fmt(series.raw_accuracy) if series.raw_accuracy is not None else ""
    for x, accuracy in series.points:
        x_text = f"{x:g}"
        out.write(f"{x_text},{_fmt(accuracy)},{raw}\n")
    return out.getvalue().encode("utf-8")
