"""
Tests for read classes and the error hierarchy.
"""

import pytest

from readsift.core.errors import (
    DataError,
    NumericError,
    PafParseError,
    ReadLengthConflictError,
    ReadsiftError,
    ReadTooShortError,
    ShapeError,
    SignalRejectedError,
    ZeroCoverageError,
)
from readsift.core.labels import CLASSES, ReadClass


class TestReadClass:
    """Test suite for ReadClass."""

    def test_fixed_order(self) -> None:
        """Test the model output order of the four classes."""
        assert [c.value for c in CLASSES] == ["chimeric", "left_repeat", "right_repeat", "regular"]

    def test_index_round_trip(self) -> None:
        """Test that index and from_index agree."""
        for k, cls in enumerate(CLASSES):
            assert cls.index == k
            assert ReadClass.from_index(k) is cls

    def test_mirrored(self) -> None:
        """Test that mirroring swaps only the repeat classes."""
        assert ReadClass.LEFT_REPEAT.mirrored() is ReadClass.RIGHT_REPEAT
        assert ReadClass.RIGHT_REPEAT.mirrored() is ReadClass.LEFT_REPEAT
        assert ReadClass.CHIMERIC.mirrored() is ReadClass.CHIMERIC
        assert ReadClass.REGULAR.mirrored() is ReadClass.REGULAR

    def test_from_string(self) -> None:
        """Test parsing a class from its file representation."""
        assert ReadClass("left_repeat") is ReadClass.LEFT_REPEAT
        with pytest.raises(ValueError):
            ReadClass("unknown")


class TestErrors:
    """Test suite for the error hierarchy."""

    def test_branches(self) -> None:
        """Test that data and numeric errors share the base class."""
        assert issubclass(DataError, ReadsiftError)
        assert issubclass(NumericError, ReadsiftError)
        assert not issubclass(NumericError, DataError)

    def test_paf_error_message(self) -> None:
        """Test that parse errors carry the line number."""
        error = PafParseError(7, "bad strand")

        assert str(error) == "line 7: bad strand"
        assert error.line_number == 7

    def test_length_conflict_is_parse_error(self) -> None:
        """Test that a length conflict is reported like a parse error."""
        error = ReadLengthConflictError(3, "r1", 100, 200)

        assert isinstance(error, PafParseError)
        assert "r1" in str(error)

    def test_rejection_reasons(self) -> None:
        """Test the reason codes of rejected signals."""
        assert ReadTooShortError("a", "x").reason == "too_short"
        assert ZeroCoverageError("a", "x").reason == "zero_coverage"
        assert issubclass(ReadTooShortError, SignalRejectedError)

    def test_shape_error_message(self) -> None:
        """Test that expected and actual shapes are appended."""
        assert str(ShapeError("matmul", (2, 3), (3, 2))) == "matmul (expected (2, 3), got (3, 2))"
        assert str(ShapeError("plain")) == "plain"
