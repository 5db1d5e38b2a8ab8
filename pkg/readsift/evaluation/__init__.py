"""Classification, metrics, the labeled-size benchmark and latent-space embedding."""

from readsift.evaluation.metrics import (
    PRCurve,
    confusion_matrix,
    macro_f_score,
    mean_pr_curve,
    per_class_f1,
    pr_curve,
)

__all__ = [
    "PRCurve",
    "confusion_matrix",
    "macro_f_score",
    "mean_pr_curve",
    "per_class_f1",
    "pr_curve",
]
