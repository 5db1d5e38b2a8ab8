"""
Tests for the SVG figure renderers.
"""

import numpy as np
import pytest

from readsift.core.labels import CLASSES, ReadClass
from readsift.evaluation.metrics import PRCurve, pr_curve
from readsift.evaluation.tsne import Embedding
from readsift.genomics.signals import Signal
from readsift.utils.svg import CLASS_COLORS, UNLABELED_COLOR, coverage_plot, line_plot, pr_plot, scatter_plot


GOLDEN_COVERAGE_SVG = """<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="640" height="480" viewBox="0 0 640 480" font-family="sans-serif" font-size="12">
<title>Coverage signal</title>
<rect x="0" y="0" width="640" height="480" fill="#ffffff"/>
<text x="320" y="24" text-anchor="middle" font-size="15">Coverage signal</text>
<g stroke="#000000" stroke-width="1"><line x1="64" y1="424" x2="490" y2="424"/><line x1="64" y1="40" x2="64" y2="424"/></g>
<line x1="64.00" y1="424" x2="64.00" y2="428" stroke="#000000"/><text x="64.00" y="442" text-anchor="middle">0</text>
<line x1="170.50" y1="424" x2="170.50" y2="428" stroke="#000000"/><text x="170.50" y="442" text-anchor="middle">0.25</text>
<line x1="277.00" y1="424" x2="277.00" y2="428" stroke="#000000"/><text x="277.00" y="442" text-anchor="middle">0.5</text>
<line x1="383.50" y1="424" x2="383.50" y2="428" stroke="#000000"/><text x="383.50" y="442" text-anchor="middle">0.75</text>
<line x1="490.00" y1="424" x2="490.00" y2="428" stroke="#000000"/><text x="490.00" y="442" text-anchor="middle">1</text>
<line x1="60" y1="424.00" x2="64" y2="424.00" stroke="#000000"/><text x="56" y="424.00" text-anchor="end" dominant-baseline="middle">0</text>
<line x1="60" y1="328.00" x2="64" y2="328.00" stroke="#000000"/><text x="56" y="328.00" text-anchor="end" dominant-baseline="middle">0.25</text>
<line x1="60" y1="232.00" x2="64" y2="232.00" stroke="#000000"/><text x="56" y="232.00" text-anchor="end" dominant-baseline="middle">0.5</text>
<line x1="60" y1="136.00" x2="64" y2="136.00" stroke="#000000"/><text x="56" y="136.00" text-anchor="end" dominant-baseline="middle">0.75</text>
<line x1="60" y1="40.00" x2="64" y2="40.00" stroke="#000000"/><text x="56" y="40.00" text-anchor="end" dominant-baseline="middle">1</text>
<text x="277" y="464" text-anchor="middle">position (fraction of read)</text>
<text x="16" y="232" text-anchor="middle" transform="rotate(-90 16 232)">normalized coverage</text>
<polyline points="64.00,424.00 277.00,232.00 490.00,40.00" fill="none" stroke="#1f77b4" stroke-width="1.5"/>
<g class="legend">
<g class="legend-entry"><rect x="506" y="46" width="12" height="12" fill="#1f77b4"/><text x="524" y="52" dominant-baseline="middle">r1</text></g>
</g>
</svg>
"""


@pytest.fixture
def embedding() -> Embedding:
    coords = np.array([[0.0, 0.0], [1.0, 2.0], [-1.5, 0.5], [3.0, -2.0]])
    labels = {"a": ReadClass.CHIMERIC, "b": ReadClass.REGULAR}
    return Embedding(("a", "b", "c", "d"), coords, labels)


@pytest.fixture
def curve() -> PRCurve:
    truth = [ReadClass.CHIMERIC, ReadClass.REGULAR, ReadClass.CHIMERIC, ReadClass.REGULAR]
    return pr_curve([0.9, 0.6, 0.4, 0.2], truth, ReadClass.CHIMERIC)


class TestScatterPlot:
    """Test suite for latent-space scatter plots."""

    def test_legend_lists_all_classes(self, embedding: Embedding) -> None:
        """Test that all four classes appear in the legend even when some are unused."""
        svg = scatter_plot(embedding)
        assert svg.count('class="legend-entry"') == 4
        for cls in CLASSES:
            assert f">{cls.value}</text>" in svg

    def test_point_colors(self, embedding: Embedding) -> None:
        """Test class colors and grey for unlabeled points."""
        svg = scatter_plot(embedding)
        assert svg.count("<circle") == 4
        assert svg.count(f'r="3" fill="{CLASS_COLORS[ReadClass.CHIMERIC]}"') == 1
        assert svg.count(f'r="3" fill="{UNLABELED_COLOR}"') == 2

    def test_same_input_same_bytes(self, embedding: Embedding) -> None:
        """Test that rendering is deterministic."""
        assert scatter_plot(embedding).encode() == scatter_plot(embedding).encode()

    def test_empty_embedding(self) -> None:
        """Test that there must be something to plot."""
        with pytest.raises(ValueError):
            scatter_plot(Embedding((), np.zeros((0, 2))))


class TestPRPlot:
    """Test suite for precision-recall figures."""

    def test_one_line_per_curve(self, curve: PRCurve) -> None:
        """Test series count and AUC labels."""
        svg = pr_plot([("chimeric", curve), ("again", curve)])
        assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>')
        assert svg.rstrip().endswith("</svg>")
        assert svg.count("<polyline") == 2
        assert f"chimeric (AUC {curve.auc:.3f})" in svg

    def test_empty_curve(self) -> None:
        """Test that an empty curve is refused."""
        empty = PRCurve(np.array([]), np.array([]), np.array([]))
        with pytest.raises(ValueError, match="empty"):
            pr_plot([("nothing", empty)])

    def test_no_curves(self) -> None:
        """Test that at least one curve is needed."""
        with pytest.raises(ValueError):
            pr_plot([])


class TestLinePlots:
    """Test suite for coverage and generic line plots."""

    def test_coverage_plot(self) -> None:
        """Test one labeled line per signal."""
        signals = [Signal("r1", np.linspace(0.0, 1.0, 8)), Signal("r2", np.full(8, 0.5))]
        svg = coverage_plot(signals)
        assert svg.count("<polyline") == 2
        assert ">r1</text>" in svg and ">r2</text>" in svg

    def test_escapes_text(self) -> None:
        """Test that titles and labels are XML-escaped."""
        svg = line_plot([("a<b", np.array([0.0, 1.0]), np.array([1.0, 2.0]))], "x & y", "x", "y")
        assert "x &amp; y" in svg
        assert "a&lt;b" in svg

    def test_flat_series_has_a_frame(self) -> None:
        """Test that a constant series still gets a non-degenerate axis."""
        svg = line_plot([("flat", np.array([0.0, 1.0, 2.0]), np.full(3, 4.0))], "flat", "x", "y")
        assert "nan" not in svg

    def test_no_points(self) -> None:
        """Test that an empty series is refused."""
        with pytest.raises(ValueError, match="no data points"):
            line_plot([("none", np.array([]), np.array([]))], "empty", "x", "y")

    def test_golden_coverage_plot(self) -> None:
        """Test the exact bytes of a one-signal coverage plot."""
        svg = coverage_plot([Signal("r1", np.array([0.0, 0.5, 1.0]))])
        assert svg.encode("utf-8") == GOLDEN_COVERAGE_SVG.encode("utf-8")
