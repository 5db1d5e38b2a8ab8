"""
Input Validation for readsift.

Validates the identifiers and paths that flow into the tab-separated file
formats, so that a bad read id or output path is rejected before any work
starts rather than corrupting a half-written output.

Checks:
- Read ids: non-empty, no whitespace, no null bytes, bounded length
- Input paths: exist and are regular files
- Output paths: parent directory exists, target is not a directory
"""

import re
from pathlib import Path

from pydantic import BaseModel, Field, field_validator


class ReadIdInput(BaseModel):
    """Validation schema for read identifiers."""

    read_id: str = Field(..., min_length=1, max_length=255)

    @field_validator("read_id")
    @classmethod
    def validate_read_id(cls, v: str) -> str:
        """Validate a read id."""
        if "\x00" in v:
            raise ValueError("Read id cannot contain null bytes")

        # Tab and newline would break every TSV format we write
        if re.search(r"\s", v):
            raise ValueError("Read id cannot contain whitespace")

        return v


class PathInput(BaseModel):
    """Validation schema for file paths."""

    path: str = Field(..., min_length=1, max_length=4096)

    @field_validator("path")
    @classmethod
    def validate_path(cls, v: str) -> str:
        """Validate file path."""
        if "\x00" in v:
            raise ValueError("File path cannot contain null bytes")

        return v


class InputValidator:
    """
    Validates identifiers and paths used by the pipeline.

    Example:
        >>> validator = InputValidator()
        >>> validator.validate_read_id("m54006_170304/4194374/0_11200")
        'm54006_170304/4194374/0_11200'
        >>> validator.validate_read_id("read 1")
        # Raises ValueError: Read id cannot contain whitespace
    """

    def validate_read_id(self, read_id: str) -> str:
        """
        Validate a read id.

        Args:
            read_id: Read identifier

        Returns:
            The validated read id

        Raises:
            ValueError: If validation fails
        """
        return ReadIdInput(read_id=read_id).read_id

    def validate_input_path(self, path: str | Path) -> Path:
        """
        Validate a path that must be read.

        Args:
            path: Input file path

        Returns:
            Resolved Path

        Raises:
            ValueError: If the path is malformed, missing, or not a file
        """
        checked = Path(PathInput(path=str(path)).path).expanduser()
        if not checked.exists():
            raise ValueError(f"Input file not found: {path}")
        if not checked.is_file():
            raise ValueError(f"Input path is not a file: {path}")
        return checked.resolve()

    def validate_output_path(self, path: str | Path) -> Path:
        """
        Validate a path that will be written.

        Args:
            path: Output file path

        Returns:
            Resolved Path

        Raises:
            ValueError: If the parent directory is missing or the path is a directory
        """
        checked = Path(PathInput(path=str(path)).path).expanduser()
        if checked.is_dir():
            raise ValueError(f"Output path is a directory: {path}")
        if not checked.parent.exists():
            raise ValueError(f"Output directory does not exist: {checked.parent}")
        return checked.resolve()
