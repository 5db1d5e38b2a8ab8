"""
Classification metrics: confusion matrix, per-class and macro F1, and
precision-recall curves.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from readsift.core.errors import DataError, UndefinedRecallError
from readsift.core.labels import CLASSES, ReadClass
from readsift.genomics.signals import format_real

logger = logging.getLogger(__name__)

RECALL_GRID = np.linspace(0.0, 1.0, 101)


def _aligned(pred: Mapping[str, ReadClass], truth: Mapping[str, ReadClass]) -> tuple[np.ndarray, np.ndarray]:
    if set(pred) != set(truth):
        only_pred = len(set(pred) - set(truth))
        only_truth = len(set(truth) - set(pred))
        raise DataError(
            f"predictions and truth cover different reads ({only_pred} only predicted, {only_truth} only in truth)"
        )
    ids = sorted(truth)
    return (
        np.array([ReadClass(pred[i]).index for i in ids], dtype=np.int64),
        np.array([ReadClass(truth[i]).index for i in ids], dtype=np.int64),
    )


def confusion_indices(pred: np.ndarray, truth: np.ndarray, n_classes: int = len(CLASSES)) -> np.ndarray:
    matrix = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(matrix, (truth, pred), 1)
    return matrix


def confusion_matrix(pred: Mapping[str, ReadClass], truth: Mapping[str, ReadClass]) -> np.ndarray:
    """``K x K`` counts; row = true class, column = predicted class (``CLASSES`` order)."""
    p, t = _aligned(pred, truth)
    return confusion_indices(p, t)


def f1_from_confusion(matrix: np.ndarray, warn: bool = True) -> np.ndarray:
    """Per-class F1; a class with no true and no predicted members scores 0."""
    tp = np.diag(matrix).astype(np.float64)
    predicted = matrix.sum(axis=0)
    actual = matrix.sum(axis=1)
    f1 = np.zeros(len(matrix))
    for c in range(len(matrix)):
        if predicted[c] == 0 and actual[c] == 0:
            if warn:
                logger.warning("Class %s is absent from truth and predictions; its F1 counts as 0", CLASSES[c])
            continue
        precision = tp[c] / predicted[c] if predicted[c] else 0.0
        recall = tp[c] / actual[c] if actual[c] else 0.0
        f1[c] = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return f1


def per_class_f1(pred: Mapping[str, ReadClass], truth: Mapping[str, ReadClass]) -> dict[ReadClass, float]:
    f1 = f1_from_confusion(confusion_matrix(pred, truth))
    return {cls: float(f1[cls.index]) for cls in CLASSES}


def macro_f_score_indices(pred: np.ndarray, truth: np.ndarray, warn: bool = True) -> float:
    return float(f1_from_confusion(confusion_indices(pred, truth), warn).mean())


def macro_f_score(pred: Mapping[str, ReadClass], truth: Mapping[str, ReadClass]) -> float:
    """
    Unweighted mean of per-class F1 over all four classes.

    Raises:
        DataError: If the two maps cover different read ids
    """
    return float(np.mean(list(per_class_f1(pred, truth).values())))


# ============================================================================
# Precision-recall curves
# ============================================================================


@dataclass(frozen=True, eq=False)
class PRCurve:
    """
    Precision/recall points.

    Per-class curves hold one point per distinct threshold, thresholds
    ascending (so recall is non-increasing). Mean curves are sampled on the
    recall grid and carry NaN thresholds.
    """

    thresholds: np.ndarray
    precision: np.ndarray
    recall: np.ndarray

    def __len__(self) -> int:
        return int(self.recall.size)

    def _by_recall(self) -> tuple[np.ndarray, np.ndarray]:
        if np.all(np.isnan(self.thresholds)):
            order = np.argsort(self.recall, kind="stable")
        else:
            order = np.argsort(-self.thresholds, kind="stable")
        return self.recall[order], self.precision[order]

    @property
    def auc(self) -> float:
        """Trapezoid area over recall, starting at recall 0 with the first point's precision."""
        if len(self) == 0:
            return 0.0
        recall, precision = self._by_recall()
        recall = np.concatenate([[0.0], recall])
        precision = np.concatenate([[precision[0]], precision])
        return float(np.sum(np.diff(recall) * (precision[1:] + precision[:-1]) / 2.0))

    def to_tsv(self) -> str:
        lines = ["threshold\tprecision\trecall"]
        for t, p, r in zip(self.thresholds, self.precision, self.recall, strict=True):
            lines.append(f"{'NA' if np.isnan(t) else format_real(t)}\t{format_real(p)}\t{format_real(r)}")
        return "\n".join(lines) + "\n"

    def save(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_tsv())


def load_pr_curve(path: Path) -> PRCurve:
    rows: list[tuple[float, float, float]] = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if line_number == 1 or not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            try:
                t, p, r = (float("nan") if v == "NA" else float(v) for v in fields[:3])
            except ValueError:
                raise DataError(f"{path}:{line_number}: expected threshold<TAB>precision<TAB>recall") from None
            rows.append((t, p, r))
    data = np.array(rows, dtype=np.float64).reshape(-1, 3)
    return PRCurve(data[:, 0], data[:, 1], data[:, 2])


def pr_curve(scores: Sequence[float], truth: Sequence[ReadClass], cls: ReadClass) -> PRCurve:
    """
    Precision and recall of "score >= t" at every distinct score ``t``.

    Raises:
        UndefinedRecallError: If no item truly belongs to ``cls``
    """
    s = np.asarray(scores, dtype=np.float64)
    positive = np.array([ReadClass(t) is cls for t in truth], dtype=bool)
    if s.shape != positive.shape:
        raise DataError(f"{s.size} scores but {positive.size} truth labels")
    n_positive = int(positive.sum())
    if n_positive == 0:
        raise UndefinedRecallError(f"recall is undefined for class {cls}: no positive examples")

    order = np.argsort(-s, kind="stable")
    s_desc, pos_desc = s[order], positive[order]
    tp = np.cumsum(pos_desc)
    # last index of each run of equal scores in descending order
    ends = np.flatnonzero(np.append(s_desc[1:] != s_desc[:-1], True))
    precision = tp[ends] / (ends + 1)
    recall = tp[ends] / n_positive
    thresholds = s_desc[ends]
    return PRCurve(thresholds[::-1].copy(), precision[::-1].copy(), recall[::-1].copy())


def interpolate_precision(curve: PRCurve, grid: np.ndarray = RECALL_GRID) -> np.ndarray:
    """
    Precision on a recall grid, stepwise and right-continuous.

    At duplicate recalls the highest precision is kept; grid points below
    the smallest recall take the precision of the smallest recall.
    """
    recalls, inverse = np.unique(curve.recall, return_inverse=True)
    best = np.full(recalls.size, -np.inf)
    np.maximum.at(best, inverse, curve.precision)
    index = np.clip(np.searchsorted(recalls, grid, side="right") - 1, 0, recalls.size - 1)
    return best[index]


def mean_pr_curve(curves: Sequence[PRCurve]) -> PRCurve:
    """Average precision of several curves on the 101-point recall grid."""
    if not curves:
        raise DataError("mean_pr_curve needs at least one curve")
    precision = np.mean([interpolate_precision(c) for c in curves], axis=0)
    return PRCurve(np.full(RECALL_GRID.size, np.nan), precision, RECALL_GRID.copy())
