"""Evaluation metrics: accuracy, ROC/AUC, EER, F1, and run-level reports.

Conventions: fake is the positive class; a frame is predicted fake
when score >= threshold. ROC sweeps unique score values descending,
grouping ties into a single step, which makes trapezoidal AUC equal
to the pairwise Mann-Whitney statistic (ties counted 1/2) exactly.
Metrics are reported as percentages.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MetricsError

POSITIVE_LABEL = "fake"
NEGATIVE_LABEL = "real"

_trapezoid = getattr(np, "trapezoid", None) or np.trapz  # numpy < 2.0


@dataclass(frozen=True)
class LabeledScore:
    frame_id: str
    label: str  # real | fake
    score: float
    family: str | None = None  # optional manipulation family, for breakdowns

    def __post_init__(self):
        if self.label not in (POSITIVE_LABEL, NEGATIVE_LABEL):
            raise MetricsError(f"unknown label {self.label!r}")
        if not 0.0 <= self.score <= 1.0:
            raise MetricsError(f"score {self.score} outside [0, 1]")


@dataclass(frozen=True)
class RocCurve:
    """Operating points from (0, 0) to (1, 1), one per tie-grouped threshold.

    ``thresholds[i]`` is the score cut realizing point i (predict fake
    when score >= threshold); the (0, 0) point carries +inf.
    """

    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray

    @property
    def fnr(self) -> np.ndarray:
        return 1.0 - self.tpr


def roc_curve(data) -> RocCurve:
    data = list(data)
    labels = np.array([d.label == POSITIVE_LABEL for d in data], dtype=bool)
    scores = np.array([d.score for d in data], dtype=np.float64)
    n_pos = int(labels.sum())
    n_neg = int((~labels).sum())
    if n_pos == 0 or n_neg == 0:
        raise MetricsError(
            f"ROC needs both classes (got {n_pos} positive, {n_neg} negative)"
        )
    order = np.argsort(-scores, kind="stable")
    scores = scores[order]
    labels = labels[order]
    tp = np.cumsum(labels)
    fp = np.cumsum(~labels)
    # keep only the last index of each tie group
    last = np.nonzero(np.diff(scores, append=-np.inf) != 0.0)[0]
    tpr = np.concatenate([[0.0], tp[last] / n_pos])
    fpr = np.concatenate([[0.0], fp[last] / n_neg])
    thresholds = np.concatenate([[np.inf], scores[last]])
    return RocCurve(fpr=fpr, tpr=tpr, thresholds=thresholds)


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under the ROC curve, in [0, 1]."""
    return float(_trapezoid(curve.tpr, curve.fpr))


def eer(curve: RocCurve) -> tuple[float, float]:
    """Equal error rate and the interpolated threshold achieving it.

    FPR - FNR is non-decreasing along the sweep; the crossing is found
    by linear interpolation between the bracketing operating points.
    """
    diff = curve.fpr - curve.fnr
    idx = int(np.searchsorted(diff, 0.0, side="left"))
    if idx >= len(diff):  # numerically possible only via degenerate input
        idx = len(diff) - 1
    if diff[idx] == 0.0:
        return float(curve.fpr[idx]), float(curve.thresholds[idx])
    # diff[idx] > 0 and idx >= 1 here because diff starts at -1
    f1, f2 = curve.fpr[idx - 1], curve.fpr[idx]
    m1, m2 = curve.fnr[idx - 1], curve.fnr[idx]
    denom = (f2 - f1) + (m1 - m2)
    w = (m1 - f1) / denom
    rate = 0.5 * ((f1 + w * (f2 - f1)) + (m1 + w * (m2 - m1)))
    t1, t2 = curve.thresholds[idx - 1], curve.thresholds[idx]
    threshold = float(t2) if np.isinf(t1) else float(t1 + w * (t2 - t1))
    return float(rate), threshold


@dataclass(frozen=True)
class MetricRow:
    """One operation's metrics, in percent, plus confusion counts."""

    accuracy: float
    auc: float
    eer: float
    f1: float
    precision: float
    recall: float
    counts: tuple[int, int, int, int]  # TP, FP, TN, FN

    @property
    def n(self) -> int:
        return sum(self.counts)


def threshold_metrics(data, threshold: float) -> MetricRow:
    """Confusion metrics at a fixed decision threshold (predict fake if
    score >= threshold). AUC/EER fields are NaN here; see metric_row."""
    tp = fp = tn = fn = 0
    for d in data:
        predicted_fake = d.score >= threshold
        actual_fake = d.label == POSITIVE_LABEL
        if predicted_fake and actual_fake:
            tp += 1
        elif predicted_fake:
            fp += 1
        elif actual_fake:
            fn += 1
        else:
            tn += 1
    total = tp + fp + tn + fn
    if total == 0:
        raise MetricsError("no scores to evaluate")
    accuracy = (tp + tn) / total
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        f1 = 0.0  # convention: no predicted or actual positives hit
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    return MetricRow(
        accuracy=100.0 * accuracy,
        auc=float("nan"),
        eer=float("nan"),
        f1=100.0 * f1,
        precision=100.0 * precision,
        recall=100.0 * recall,
        counts=(tp, fp, tn, fn),
    )


def metric_row(data, threshold: float) -> MetricRow:
    """Full metric row: threshold metrics plus AUC and EER in percent."""
    data = list(data)
    base = threshold_metrics(data, threshold)
    curve = roc_curve(data)
    area = auc(curve)
    rate, _ = eer(curve)
    return MetricRow(
        accuracy=base.accuracy,
        auc=100.0 * area,
        eer=100.0 * rate,
        f1=base.f1,
        precision=base.precision,
        recall=base.recall,
        counts=base.counts,
    )


@dataclass(frozen=True)
class MetricDeltas:
    accuracy: float
    auc: float
    eer: float
    f1: float


@dataclass
class ReportRow:
    label: str
    category: str
    pipeline: str
    metrics: MetricRow
    deltas: MetricDeltas | None = None
    family_metrics: dict[str, MetricRow] = field(default_factory=dict)


@dataclass
class EvalReport:
    """Per-operation metric rows plus run metadata for rendering."""

    rows: list[ReportRow]
    metadata: dict = field(default_factory=dict)

    def row(self, label: str) -> ReportRow:
        for row in self.rows:
            if row.label == label:
                return row
        raise KeyError(label)

    @property
    def labels(self) -> list[str]:
        return [row.label for row in self.rows]


BASELINE_LABEL = "raw"


def evaluate_run(
    scores_by_op: dict[str, list[LabeledScore]],
    threshold: float = 0.5,
    categories: dict[str, str] | None = None,
    pipelines: dict[str, str] | None = None,
    per_family: bool = False,
    deltas: bool = True,
) -> EvalReport:
    """Metric rows for every operation, with deltas against "raw".

    Rows come out in the insertion order of ``scores_by_op`` (config
    order). Results do not depend on the ordering of each score list.
    """
    categories = categories or {}
    pipelines = pipelines or {}
    if deltas and BASELINE_LABEL not in scores_by_op:
        raise MetricsError(
            f"deltas requested but no {BASELINE_LABEL!r} operation present"
        )
    rows: list[ReportRow] = []
    baseline: MetricRow | None = None
    for label, scores in scores_by_op.items():
        # sort for order independence (ties are grouped anyway; this
        # also stabilizes confusion counting against input shuffles)
        ordered = sorted(scores, key=lambda s: s.frame_id)
        row = ReportRow(
            label=label,
            category=categories.get(label, ""),
            pipeline=pipelines.get(label, ""),
            metrics=metric_row(ordered, threshold),
        )
        if per_family:
            families = sorted(
                {s.family for s in ordered if s.family and s.label == POSITIVE_LABEL}
            )
            for family in families:
                subset = [
                    s
                    for s in ordered
                    if s.label == NEGATIVE_LABEL or s.family == family
                ]
                if any(s.label == POSITIVE_LABEL for s in subset) and any(
                    s.label == NEGATIVE_LABEL for s in subset
                ):
                    row.family_metrics[family] = metric_row(subset, threshold)
        rows.append(row)
        if label == BASELINE_LABEL:
            baseline = row.metrics
    if deltas:
        for row in rows:
            row.deltas = MetricDeltas(
                accuracy=row.metrics.accuracy - baseline.accuracy,
                auc=row.metrics.auc - baseline.auc,
                eer=row.metrics.eer - baseline.eer,
                f1=row.metrics.f1 - baseline.f1,
            )
    return EvalReport(rows=rows)


def aggregate_by_video(scores, video_of: dict[str, str]) -> list[LabeledScore]:
    """Collapse frame scores to one mean-score sample per video."""
    grouped: dict[str, list[LabeledScore]] = {}
    for s in scores:
        video = video_of.get(s.frame_id)
        if video is None:
            raise MetricsError(f"no video mapping for frame {s.frame_id!r}")
        grouped.setdefault(video, []).append(s)
    out = []
    for video in sorted(grouped):
        members = grouped[video]
        labels = {m.label for m in members}
        if len(labels) != 1:
            raise MetricsError(f"video {video!r} mixes labels {labels}")
        families = {m.family for m in members}
        out.append(
            LabeledScore(
                frame_id=video,
                label=members[0].label,
                score=float(np.mean([m.score for m in members])),
                family=families.pop() if len(families) == 1 else None,
            )
        )
    return out
