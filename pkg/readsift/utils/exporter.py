"""
Evaluation report exporters.
"""

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path

import numpy as np

from readsift.core.errors import UndefinedRecallError
from readsift.core.labels import CLASSES, ReadClass
from readsift.evaluation.classify import Classification, labels_of
from readsift.evaluation.metrics import (
    PRCurve,
    confusion_matrix,
    f1_from_confusion,
    mean_pr_curve,
    pr_curve,
)
from readsift.genomics.signals import format_real

logger = logging.getLogger(__name__)


def class_curves(
    classifications: Sequence[Classification], truth: Mapping[str, ReadClass]
) -> dict[ReadClass, PRCurve]:
    """Per-class PR curves; classes with no true member are skipped with a warning."""
    ordered = [c for c in classifications if c.read_id in truth]
    labels = [truth[c.read_id] for c in ordered]
    curves: dict[ReadClass, PRCurve] = {}
    for cls in CLASSES:
        scores = [float(c.scores[cls.index]) for c in ordered]
        try:
            curves[cls] = pr_curve(scores, labels, cls)
        except UndefinedRecallError as e:
            logger.warning("Skipping PR curve: %s", e)
    return curves


def metrics_table(classifications: Sequence[Classification], truth: Mapping[str, ReadClass]) -> str:
    """``metric<TAB>value`` lines: macro_f, then F1 of every class."""
    matrix = confusion_matrix(labels_of(classifications), truth)
    f1 = f1_from_confusion(matrix)
    lines = ["metric\tvalue", f"macro_f\t{format_real(float(f1.mean()))}"]
    lines.extend(f"f1.{cls.value}\t{format_real(float(f1[cls.index]))}" for cls in CLASSES)
    return "\n".join(lines) + "\n"


class ReportExporter:
    """
    Generates a Markdown evaluation report for one set of classifications.

    The report depends only on its inputs, so the same run always produces
    the same file.
    """

    @staticmethod
    def render(title: str, classifications: Sequence[Classification], truth: Mapping[str, ReadClass]) -> str:
        """
        Raises:
            DataError: If classifications and truth cover different reads
        """
        matrix = confusion_matrix(labels_of(classifications), truth)
        f1 = f1_from_confusion(matrix, warn=False)
        curves = class_curves(classifications, truth)

        report = f"""# Evaluation Report: {title}

## Overview
- **Reads:** {len(classifications)}
- **Macro F-score:** {f1.mean():.4f}
- **Predicted chimeric:** {int(matrix[:, ReadClass.CHIMERIC.index].sum())}

## Per-class F1
| class | truth | predicted | F1 | PR AUC |
|---|---:|---:|---:|---:|
"""
        for cls in CLASSES:
            k = cls.index
            auc = f"{curves[cls].auc:.4f}" if cls in curves else "n/a"
            report += f"| {cls.value} | {int(matrix[k].sum())} | {int(matrix[:, k].sum())} | {f1[k]:.4f} | {auc} |\n"

        if curves:
            report += f"\nMean PR AUC over {len(curves)} classes: {mean_pr_curve(list(curves.values())).auc:.4f}\n"

        report += "\n## Confusion Matrix\nRows are true classes, columns predicted classes.\n\n"
        report += "| | " + " | ".join(cls.value for cls in CLASSES) + " |\n"
        report += "|---|" + "---:|" * len(CLASSES) + "\n"
        for cls, row in zip(CLASSES, np.asarray(matrix).tolist(), strict=True):
            report += f"| **{cls.value}** | " + " | ".join(str(v) for v in row) + " |\n"
        return report

    @staticmethod
    def export(
        path: Path, title: str, classifications: Sequence[Classification], truth: Mapping[str, ReadClass]
    ) -> str:
        """Write the report to ``path`` and return the path as a string."""
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(ReportExporter.render(title, classifications, truth))
        return str(path)
