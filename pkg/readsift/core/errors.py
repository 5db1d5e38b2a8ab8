"""
Error hierarchy for readsift.

Every failure the library raises on purpose derives from ``ReadsiftError``.
The CLI maps the two branches onto exit codes: ``DataError`` -> 2 and
``NumericError`` -> 3.
"""

from typing import Optional


class ReadsiftError(Exception):
    """Base class for all readsift errors."""


class DataError(ReadsiftError):
    """Input data is malformed, inconsistent or unusable."""


class NumericError(ReadsiftError):
    """A numeric computation diverged (non-finite loss or parameter)."""


class PafParseError(DataError):
    """A PAF line could not be parsed or violates a record invariant."""

    def __init__(self, line_number: int, reason: str) -> None:
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"line {line_number}: {reason}")


class ReadLengthConflictError(PafParseError):
    """The same read id was given two different lengths."""

    def __init__(self, line_number: int, read_id: str, known: int, found: int) -> None:
        self.read_id = read_id
        super().__init__(
            line_number,
            f"read '{read_id}' has length {found}, previously seen with length {known}",
        )


class UnknownReadError(DataError):
    """An overlap references a read that is missing from the read table."""

    def __init__(self, read_id: str) -> None:
        self.read_id = read_id
        super().__init__(f"read '{read_id}' is not in the read table")


class SignalRejectedError(DataError):
    """A coverage graph cannot be turned into a model signal."""

    reason = "rejected"

    def __init__(self, read_id: str, detail: str) -> None:
        self.read_id = read_id
        super().__init__(f"read '{read_id}': {detail}")


class ReadTooShortError(SignalRejectedError):
    reason = "too_short"


class ZeroCoverageError(SignalRejectedError):
    reason = "zero_coverage"


class UndefinedRecallError(DataError):
    """A precision-recall curve was requested for a class with no positives."""


class InfeasibleParametersError(DataError):
    """Requested parameters cannot be satisfied by the data or generator."""


class CheckpointFormatError(DataError):
    """A checkpoint file is truncated, has a bad magic or an unknown layout."""


class ShapeError(DataError):
    """Tensor shapes do not agree."""

    def __init__(self, message: str, expected: Optional[tuple] = None, got: Optional[tuple] = None) -> None:
        if expected is not None or got is not None:
            message = f"{message} (expected {expected}, got {got})"
        super().__init__(message)
