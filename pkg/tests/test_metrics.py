"""Metric correctness against hand enumeration and brute-force oracles."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from benignbench.errors import MetricsError
from benignbench.metrics import (
    LabeledScore,
    aggregate_by_video,
    auc,
    eer,
    evaluate_run,
    roc_curve,
    threshold_metrics,
)


def ls(frame_id, label, score, family=None):
    return LabeledScore(frame_id=frame_id, label=label, score=score, family=family)


def make_scores(pos, neg):
    data = [ls(f"p{i}", "fake", s) for i, s in enumerate(pos)]
    data += [ls(f"n{i}", "real", s) for i, s in enumerate(neg)]
    return data


def auc_pairwise_oracle(pos, neg):
    """Brute-force concordance: P(pos > neg) + 0.5 P(pos == neg)."""
    total = 0.0
    for p in pos:
        for n in neg:
            if p > n:
                total += 1.0
            elif p == n:
                total += 0.5
    return total / (len(pos) * len(neg))


# strategy drawing scores from a small grid so ties actually occur
score_grid = st.floats(min_value=0.0, max_value=1.0, allow_nan=False).map(
    lambda x: round(x * 20) / 20
)
score_sets = st.tuples(
    st.lists(score_grid, min_size=1, max_size=25),
    st.lists(score_grid, min_size=1, max_size=25),
)


class TestRocCurve:
    def test_perfect_separation(self):
        curve = roc_curve(make_scores([0.9, 0.8], [0.2, 0.1]))
        points = list(zip(curve.fpr, curve.tpr))
        assert points[0] == (0.0, 0.0)
        assert (0.0, 1.0) in points
        assert points[-1] == (1.0, 1.0)

    def test_all_ties_degenerate(self):
        curve = roc_curve(make_scores([0.5, 0.5], [0.5]))
        np.testing.assert_array_equal(curve.fpr, [0.0, 1.0])
        np.testing.assert_array_equal(curve.tpr, [0.0, 1.0])

    def test_hand_enumerated_five_points(self):
        # positives {0.9, 0.6}, negatives {0.8, 0.1}; thresholds
        # {inf, 0.9, 0.8, 0.6, 0.1} give the 5 points below
        curve = roc_curve(make_scores([0.9, 0.6], [0.8, 0.1]))
        np.testing.assert_array_equal(curve.fpr, [0.0, 0.0, 0.5, 0.5, 1.0])
        np.testing.assert_array_equal(curve.tpr, [0.0, 0.5, 0.5, 1.0, 1.0])
        assert np.isinf(curve.thresholds[0])
        np.testing.assert_array_equal(curve.thresholds[1:], [0.9, 0.8, 0.6, 0.1])

    def test_monotone_endpoints_invariants(self):
        curve = roc_curve(make_scores([0.3, 0.7, 0.7], [0.1, 0.7, 0.2]))
        assert (np.diff(curve.fpr) >= 0).all()
        assert (np.diff(curve.tpr) >= 0).all()
        assert curve.fpr[0] == curve.tpr[0] == 0.0
        assert curve.fpr[-1] == curve.tpr[-1] == 1.0

    def test_single_class_rejected(self):
        with pytest.raises(MetricsError, match="both classes"):
            roc_curve([ls("a", "fake", 0.5)])


class TestAuc:
    def test_perfect_is_one(self):
        assert auc(roc_curve(make_scores([0.9, 0.8], [0.2, 0.1]))) == 1.0

    def test_inverted_is_zero(self):
        assert auc(roc_curve(make_scores([0.2, 0.1], [0.9, 0.8]))) == 0.0

    def test_hand_case_three_quarters(self):
        # 4 pairs, 3 concordant -> 0.75 exactly
        assert auc(roc_curve(make_scores([0.9, 0.6], [0.8, 0.1]))) == 0.75

    @given(score_sets)
    @settings(max_examples=200)
    def test_equals_pairwise_oracle(self, sets):
        pos, neg = sets
        area = auc(roc_curve(make_scores(pos, neg)))
        assert area == pytest.approx(auc_pairwise_oracle(pos, neg), abs=1e-9)

    @given(score_sets)
    @settings(max_examples=100)
    def test_label_swap_antisymmetry(self, sets):
        pos, neg = sets
        a = auc(roc_curve(make_scores(pos, neg)))
        b = auc(roc_curve(make_scores(neg, pos)))
        assert a + b == pytest.approx(1.0, abs=1e-9)

    @given(score_sets)
    @settings(max_examples=100)
    def test_invariant_under_increasing_transform(self, sets):
        pos, neg = sets
        f = lambda x: 0.1 + 0.8 * x**2  # strictly increasing on [0, 1]
        a = auc(roc_curve(make_scores(pos, neg)))
        b = auc(roc_curve(make_scores([f(x) for x in pos], [f(x) for x in neg])))
        assert a == pytest.approx(b, abs=1e-9)


class TestEer:
    def test_perfect_separation_zero(self):
        rate, _ = eer(roc_curve(make_scores([0.9, 0.8], [0.2, 0.1])))
        assert rate == 0.0

    def test_all_equal_half(self):
        # degenerate diagonal: FPR(t)=t and FNR(t)=1-t cross at 0.5
        rate, _ = eer(roc_curve(make_scores([0.5, 0.5], [0.5, 0.5])))
        assert rate == pytest.approx(0.5, abs=1e-12)

    def test_hand_case_crossing_at_vertex(self):
        curve = roc_curve(make_scores([0.9, 0.6], [0.8, 0.1]))
        rate, threshold = eer(curve)
        assert rate == pytest.approx(0.5, abs=1e-12)
        assert threshold == pytest.approx(0.8)
        # verify FPR == FNR at the reported point on the curve
        idx = list(curve.thresholds).index(0.8)
        assert curve.fpr[idx] == curve.fnr[idx]

    @given(score_sets)
    @settings(max_examples=200)
    def test_rates_balanced_at_returned_point(self, sets):
        pos, neg = sets
        curve = roc_curve(make_scores(pos, neg))
        rate, _ = eer(curve)
        # reconstruct both interpolated rates and check the balance
        diff = curve.fpr - curve.fnr
        idx = int(np.searchsorted(diff, 0.0))
        if diff[idx] == 0.0:
            assert abs(curve.fpr[idx] - curve.fnr[idx]) <= 1e-9
        else:
            f1, f2 = curve.fpr[idx - 1], curve.fpr[idx]
            m1, m2 = curve.fnr[idx - 1], curve.fnr[idx]
            w = (m1 - f1) / ((f2 - f1) + (m1 - m2))
            assert abs((f1 + w * (f2 - f1)) - (m1 + w * (m2 - m1))) <= 1e-9
        assert 0.0 <= rate <= 1.0


class TestThresholdMetrics:
    def test_all_correct(self):
        row = threshold_metrics(make_scores([0.9, 0.8], [0.2, 0.1]), 0.5)
        assert row.accuracy == 100.0
        assert row.f1 == 100.0
        assert row.counts == (2, 0, 2, 0)

    def test_confusion_fixture(self):
        # TP=2, FP=1, FN=1, TN=1 -> P=R=2/3, F1=2/3
        data = [
            ls("tp1", "fake", 0.9),
            ls("tp2", "fake", 0.8),
            ls("fn1", "fake", 0.2),
            ls("fp1", "real", 0.7),
            ls("tn1", "real", 0.1),
        ]
        row = threshold_metrics(data, 0.5)
        assert row.counts == (2, 1, 1, 1)
        assert row.precision == pytest.approx(100 * 2 / 3)
        assert row.recall == pytest.approx(100 * 2 / 3)
        assert row.f1 == pytest.approx(66.67, abs=0.01)
        assert row.accuracy == pytest.approx(60.0)

    def test_no_predicted_positives_f1_zero(self):
        data = [ls("a", "fake", 0.1), ls("b", "real", 0.2)]
        row = threshold_metrics(data, 0.9)
        assert row.f1 == 0.0
        assert row.counts == (0, 0, 1, 1)

    def test_boundary_predicts_fake_at_threshold(self):
        data = [ls("a", "fake", 0.5)]
        assert threshold_metrics(data, 0.5).counts[0] == 1

    @given(score_sets)
    @settings(max_examples=50)
    def test_counts_sum_and_accuracy_complement(self, sets):
        pos, neg = sets
        data = make_scores(pos, neg)
        row = threshold_metrics(data, 0.5)
        assert sum(row.counts) == len(data)
        error_rate = 100.0 - row.accuracy
        tp, fp, tn, fn = row.counts
        assert error_rate == pytest.approx(100.0 * (fp + fn) / len(data), abs=1e-9)


class TestEvaluateRun:
    def _scores(self, shift=0.0):
        return make_scores([0.9 - shift, 0.7 - shift, 0.6 - shift], [0.4, 0.2])

    def test_identical_lists_zero_deltas(self):
        report = evaluate_run({"raw": self._scores(), "copy": self._scores()})
        assert report.labels == ["raw", "copy"]
        raw, copy = report.rows
        assert raw.metrics == copy.metrics
        assert copy.deltas.accuracy == 0.0
        assert copy.deltas.auc == 0.0

    def test_degradation_shows_negative_delta(self):
        report = evaluate_run({"raw": self._scores(), "worse": self._scores(0.45)})
        assert report.row("worse").deltas.accuracy < 0

    def test_rows_in_config_order(self):
        report = evaluate_run(
            {"raw": self._scores(), "b": self._scores(), "a": self._scores()}
        )
        assert report.labels == ["raw", "b", "a"]

    def test_missing_raw_rejected(self):
        with pytest.raises(MetricsError, match="raw"):
            evaluate_run({"jpeg": self._scores()})
        report = evaluate_run({"jpeg": self._scores()}, deltas=False)
        assert report.rows[0].deltas is None

    def test_order_independence(self):
        scores = self._scores()
        fwd = evaluate_run({"raw": scores})
        rev = evaluate_run({"raw": list(reversed(scores))})
        assert fwd.row("raw").metrics == rev.row("raw").metrics

    def test_family_breakdown(self):
        data = [
            ls("r1", "real", 0.1, "pristine"),
            ls("r2", "real", 0.3, "pristine"),
            ls("d1", "fake", 0.9, "deepfake"),
            ls("d2", "fake", 0.2, "deepfake"),
            ls("s1", "fake", 0.8, "faceswap"),
        ]
        report = evaluate_run({"raw": data}, per_family=True)
        fams = report.row("raw").family_metrics
        assert set(fams) == {"deepfake", "faceswap"}
        # faceswap subset: reals {0.1, 0.3} vs fake {0.8} -> perfect
        assert fams["faceswap"].auc == 100.0
        assert fams["deepfake"].counts == (1, 0, 2, 1)


class TestVideoAggregation:
    def test_mean_per_video(self):
        scores = [
            ls("v1_f0", "fake", 0.8, "deepfake"),
            ls("v1_f1", "fake", 0.6, "deepfake"),
            ls("v2_f0", "real", 0.2, "pristine"),
        ]
        video_of = {"v1_f0": "v1", "v1_f1": "v1", "v2_f0": "v2"}
        agg = aggregate_by_video(scores, video_of)
        assert [(a.frame_id, a.label) for a in agg] == [("v1", "fake"), ("v2", "real")]
        assert agg[0].score == pytest.approx(0.7)

    def test_mixed_label_video_rejected(self):
        scores = [ls("a", "fake", 0.5), ls("b", "real", 0.5)]
        with pytest.raises(MetricsError, match="mixes labels"):
            aggregate_by_video(scores, {"a": "v", "b": "v"})


class TestLabeledScore:
    def test_validation(self):
        with pytest.raises(MetricsError):
            LabeledScore("a", "bogus", 0.5)
        with pytest.raises(MetricsError):
            LabeledScore("a", "fake", 1.5)
