"""
Tests for signal preparation and the signal/label file formats.
"""

from pathlib import Path

import numpy as np
import pytest

from readsift.core.errors import DataError, ReadTooShortError, ZeroCoverageError
from readsift.core.labels import ReadClass
from readsift.genomics.coverage import CoverageGraph
from readsift.genomics.signals import (
    Signal,
    downsample,
    format_real,
    load_labels,
    load_signals,
    normalize,
    prepare,
    prepare_all,
    save_labels,
    save_signals,
)


def _graph(read_id: str, depth: list[int]) -> CoverageGraph:
    return CoverageGraph(read_id, np.array(depth, dtype=np.int64))


# ============================================================================
# Down-sampling and normalization
# ============================================================================


class TestDownsample:
    """Test suite for bin-mean down-sampling."""

    def test_even_bins(self) -> None:
        """Test that equal-width bins hold the mean depth."""
        assert downsample(_graph("a", [1, 1, 3, 3]), 2).tolist() == [1.0, 3.0]

    def test_uneven_bins(self) -> None:
        """Test the floor(i * L / n) bin assignment on 5 bases into 2 bins."""
        # bases 0..2 -> bin 0, bases 3..4 -> bin 1
        assert downsample(_graph("a", [2, 2, 2, 4, 6]), 2).tolist() == [2.0, 5.0]

    def test_pairs(self) -> None:
        """Test [1, 2, 3, 4] into two bins."""
        assert downsample(_graph("a", [1, 2, 3, 4]), 2).tolist() == [1.5, 3.5]

    def test_matches_per_bin_mean(self) -> None:
        """Test a random 997-base read into 100 bins against a base-by-base loop."""
        depth = np.random.default_rng(8).integers(0, 60, size=997)
        members: list[list[int]] = [[] for _ in range(100)]
        for i, d in enumerate(depth):
            members[i * 100 // 997].append(int(d))
        expected = [sum(m) / len(m) for m in members]

        assert np.allclose(downsample(_graph("a", depth.tolist()), 100), expected)

    def test_identity_when_lengths_match(self) -> None:
        """Test that L == n keeps every value."""
        assert downsample(_graph("a", [0, 5, 1]), 3).tolist() == [0.0, 5.0, 1.0]

    def test_too_short(self) -> None:
        """Test that reads shorter than L are rejected, not padded."""
        with pytest.raises(ReadTooShortError) as info:
            downsample(_graph("a", [1, 2]), 3)

        assert info.value.reason == "too_short"
        assert info.value.read_id == "a"


class TestNormalize:
    """Test suite for normalize."""

    def test_max_is_one(self) -> None:
        """Test that the peak maps to exactly 1."""
        values = normalize(np.array([1.0, 4.0, 2.0]))

        assert values.tolist() == [0.25, 1.0, 0.5]

    def test_zero_coverage(self) -> None:
        """Test that an all-zero vector is rejected."""
        with pytest.raises(ZeroCoverageError) as info:
            normalize(np.zeros(4), "r")

        assert info.value.reason == "zero_coverage"


class TestPrepare:
    """Test suite for prepare and prepare_all."""

    def test_prepare(self) -> None:
        """Test the full coverage -> signal step."""
        signal = prepare(_graph("a", [1, 1, 3, 3]), 2)

        assert signal.read_id == "a"
        assert np.allclose(signal.values, [1 / 3, 1.0])

    def test_prepare_all_reports_rejections(self) -> None:
        """Test that rejected reads are counted by reason and skipped."""
        graphs = [_graph("ok", [1, 2, 3, 4]), _graph("short", [1]), _graph("empty", [0, 0, 0, 0])]

        signals, report = prepare_all(graphs, 2)

        assert [s.read_id for s in signals] == ["ok"]
        assert report.rejected == {"short": "too_short", "empty": "zero_coverage"}
        assert report.counts == {"too_short": 1, "zero_coverage": 1}
        assert len(report) == 2


class TestSignal:
    """Test suite for the Signal value type."""

    def test_rejects_out_of_range(self) -> None:
        """Test that values above 1 are invalid."""
        with pytest.raises(DataError, match="range"):
            Signal("a", np.array([0.5, 1.5]))

    def test_rejects_nan(self) -> None:
        """Test that non-finite values are invalid."""
        with pytest.raises(DataError, match="non-finite"):
            Signal("a", np.array([0.5, np.nan]))

    def test_reversed(self) -> None:
        """Test that reversal flips the values and keeps the id."""
        signal = Signal("a", np.array([0.1, 0.5, 1.0])).reversed()

        assert signal.values.tolist() == [1.0, 0.5, 0.1]
        assert signal.read_id == "a"


# ============================================================================
# Files
# ============================================================================


class TestSignalFiles:
    """Test suite for signal and label TSV files."""

    def test_format_real(self) -> None:
        """Test the 9-significant-digit rendering."""
        assert format_real(1 / 3) == "0.333333333"
        assert format_real(1.0) == "1"

    def test_signals_round_trip(self, tmp_path: Path) -> None:
        """Test that saved signals load back within print precision."""
        signals = [Signal("a", np.array([0.25, 1.0])), Signal("b", np.array([1.0, 1 / 3]))]
        path = tmp_path / "signals.tsv"

        save_signals(signals, path)
        loaded = load_signals(path)

        assert [s.read_id for s in loaded] == ["a", "b"]
        assert np.allclose(loaded[1].values, [1.0, 1 / 3], atol=1e-9)
        assert path.read_text().splitlines()[0] == "a\t0.25,1"

    def test_signals_bad_value(self, tmp_path: Path) -> None:
        """Test that a non-numeric value names the line."""
        path = tmp_path / "signals.tsv"
        path.write_text("a\t0.5,1\nb\t0.5,oops\n")

        with pytest.raises(DataError, match=":2:"):
            load_signals(path)

    def test_labels_round_trip(self, tmp_path: Path) -> None:
        """Test that labels keep their order and classes."""
        labels = {"a": ReadClass.CHIMERIC, "b": ReadClass.REGULAR}
        path = tmp_path / "labels.tsv"

        save_labels(labels, path)

        assert load_labels(path) == labels
        assert path.read_text() == "a\tchimeric\nb\tregular\n"

    def test_unknown_label(self, tmp_path: Path) -> None:
        """Test that an unknown class name is rejected."""
        path = tmp_path / "labels.tsv"
        path.write_text("a\tjunk\n")

        with pytest.raises(DataError, match="unknown label 'junk'"):
            load_labels(path)
