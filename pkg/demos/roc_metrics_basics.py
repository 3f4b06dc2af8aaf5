"""ROC/AUC/EER on a toy score set, cross-checked against brute force.

The curve sweeps unique scores descending with ties grouped, so the
trapezoidal area equals the pairwise concordance statistic exactly.
"""

from benignbench import LabeledScore, auc, eer, roc_curve, threshold_metrics

# four fakes, three reals, one tie between classes at 0.55
scores = [
    LabeledScore("fake-1", "fake", 0.95),
    LabeledScore("fake-2", "fake", 0.80),
    LabeledScore("fake-3", "fake", 0.55),
    LabeledScore("fake-4", "fake", 0.30),
    LabeledScore("real-1", "real", 0.55),
    LabeledScore("real-2", "real", 0.20),
    LabeledScore("real-3", "real", 0.10),
]

curve = roc_curve(scores)
print("threshold    FPR    TPR")
for t, fpr, tpr in zip(curve.thresholds, curve.fpr, curve.tpr):
    print(f"{t:9.2f}  {fpr:5.2f}  {tpr:5.2f}")

# brute force over all (fake, real) pairs: 1 for concordant, 0.5 for ties
pairs = [(p.score, n.score) for p in scores if p.label == "fake"
         for n in scores if n.label == "real"]
concordance = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p, n in pairs) / len(pairs)

area = auc(curve)
print(f"\nAUC (trapezoid)   = {area:.4f}")
print(f"AUC (pairwise)    = {concordance:.4f}")
assert abs(area - concordance) < 1e-12

rate, threshold = eer(curve)
print(f"EER               = {rate:.4f} at threshold {threshold:.3f}")

row = threshold_metrics(scores, 0.5)
print(f"accuracy @0.5     = {row.accuracy:.2f}%  F1 = {row.f1:.2f}%  counts TP/FP/TN/FN = {row.counts}")
