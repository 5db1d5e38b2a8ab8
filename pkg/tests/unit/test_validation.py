"""
Tests for InputValidator.

Tests cover:
- Read id validation
- Input and output path validation
- Text sanitization
"""

from pathlib import Path

import pytest

from readsift.core.validation import InputValidator


class TestInputValidator:
    """Test suite for InputValidator."""

    @pytest.fixture
    def validator(self) -> InputValidator:
        """Create an InputValidator instance."""
        return InputValidator()

    # ========================================================================
    # Read Id Validation Tests
    # ========================================================================

    def test_validate_read_id_valid(self, validator: InputValidator) -> None:
        """Test validating a PacBio-style read id."""
        assert validator.validate_read_id("m54006_170304/4194374/0_11200") == "m54006_170304/4194374/0_11200"

    def test_validate_read_id_whitespace(self, validator: InputValidator) -> None:
        """Test that ids with tabs or spaces are rejected."""
        for read_id in ("read 1", "read\t1", "read\n"):
            with pytest.raises(ValueError, match="whitespace"):
                validator.validate_read_id(read_id)

    def test_validate_read_id_null_bytes(self, validator: InputValidator) -> None:
        """Test that null bytes in read ids are rejected."""
        with pytest.raises(ValueError, match="null bytes"):
            validator.validate_read_id("read\x001")

    def test_validate_read_id_empty(self, validator: InputValidator) -> None:
        """Test that empty ids are rejected."""
        with pytest.raises(ValueError):
            validator.validate_read_id("")

    def test_validate_read_id_too_long(self, validator: InputValidator) -> None:
        """Test that ids exceeding max length are rejected."""
        with pytest.raises(ValueError):
            validator.validate_read_id("r" * 256)

    # ========================================================================
    # Path Validation Tests
    # ========================================================================

    def test_validate_input_path_valid(self, validator: InputValidator, tmp_path: Path) -> None:
        """Test validating an existing file."""
        path = tmp_path / "overlaps.paf"
        path.write_text("")

        assert validator.validate_input_path(path) == path.resolve()

    def test_validate_input_path_missing(self, validator: InputValidator, tmp_path: Path) -> None:
        """Test that missing inputs are rejected."""
        with pytest.raises(ValueError, match="not found"):
            validator.validate_input_path(tmp_path / "missing.paf")

    def test_validate_input_path_directory(self, validator: InputValidator, tmp_path: Path) -> None:
        """Test that directories are not accepted as inputs."""
        with pytest.raises(ValueError, match="not a file"):
            validator.validate_input_path(tmp_path)

    def test_validate_path_null_bytes(self, validator: InputValidator) -> None:
        """Test that null bytes in paths are rejected."""
        with pytest.raises(ValueError, match="null bytes"):
            validator.validate_input_path("file\x00.paf")

    def test_validate_output_path_valid(self, validator: InputValidator, tmp_path: Path) -> None:
        """Test that a new file in an existing directory is accepted."""
        assert validator.validate_output_path(tmp_path / "out.tsv") == (tmp_path / "out.tsv").resolve()

    def test_validate_output_path_missing_parent(self, validator: InputValidator, tmp_path: Path) -> None:
        """Test that outputs into a missing directory are rejected."""
        with pytest.raises(ValueError, match="does not exist"):
            validator.validate_output_path(tmp_path / "nope" / "out.tsv")

    def test_validate_output_path_directory(self, validator: InputValidator, tmp_path: Path) -> None:
        """Test that an existing directory cannot be an output file."""
        with pytest.raises(ValueError, match="is a directory"):
            validator.validate_output_path(tmp_path)
