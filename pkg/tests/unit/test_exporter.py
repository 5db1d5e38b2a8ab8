import numpy as np
import pytest

from readsift.core.errors import DataError
from readsift.core.labels import CLASSES, ReadClass
from readsift.evaluation.classify import Classification
from readsift.utils.exporter import ReportExporter, class_curves, metrics_table


def _one_per_class(collapse: bool = False) -> tuple[list[Classification], dict[str, ReadClass]]:
    classifications = []
    truth = {}
    for cls in CLASSES:
        scores = np.full(4, 0.1)
        scores[0 if collapse else cls.index] = 0.7
        classifications.append(Classification(f"read_{cls.value}", scores))
        truth[f"read_{cls.value}"] = cls
    return classifications, truth


def test_metrics_table_perfect():
    classifications, truth = _one_per_class()

    lines = metrics_table(classifications, truth).splitlines()

    assert lines[0] == "metric\tvalue"
    assert lines[1] == "macro_f\t1"
    assert lines[2:] == [f"f1.{cls.value}\t1" for cls in CLASSES]


def test_metrics_table_collapsed_predictor():
    classifications, truth = _one_per_class(collapse=True)

    lines = metrics_table(classifications, truth).splitlines()

    assert lines[1] == "macro_f\t0.1"
    assert lines[2] == "f1.chimeric\t0.4"
    assert lines[5] == "f1.regular\t0"


def test_class_curves_skip_absent_classes():
    classifications, truth = _one_per_class()
    kept = [c for c in classifications if truth[c.read_id] is not ReadClass.REGULAR]
    truth = {c.read_id: truth[c.read_id] for c in kept}

    curves = class_curves(kept, truth)

    assert set(curves) == {ReadClass.CHIMERIC, ReadClass.LEFT_REPEAT, ReadClass.RIGHT_REPEAT}
    assert all(curve.auc == pytest.approx(1.0) for curve in curves.values())


def test_report_render():
    classifications, truth = _one_per_class(collapse=True)

    report = ReportExporter.render("synthetic", classifications, truth)

    assert report.startswith("# Evaluation Report: synthetic")
    assert "**Reads:** 4" in report
    assert "**Macro F-score:** 0.1000" in report
    assert "**Predicted chimeric:** 4" in report
    assert "| **regular** | 1 | 0 | 0 | 0 |" in report


def test_report_marks_missing_curves():
    classifications, truth = _one_per_class()
    truth = {read_id: ReadClass.CHIMERIC for read_id in truth}

    report = ReportExporter.render("one class", classifications, truth)

    assert "n/a" in report
    assert "Mean PR AUC over 1 classes" in report


def test_report_export(tmp_path):
    classifications, truth = _one_per_class()
    path = tmp_path / "report.md"

    written = ReportExporter.export(path, "run", classifications, truth)

    assert written == str(path)
    assert path.read_text(encoding="utf-8") == ReportExporter.render("run", classifications, truth)


def test_report_needs_matching_reads():
    classifications, truth = _one_per_class()
    truth.pop("read_regular")

    with pytest.raises(DataError):
        ReportExporter.render("broken", classifications, truth)
