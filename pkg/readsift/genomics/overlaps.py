"""
PAF overlap records and the read-length table derived from them.

Only the 12 mandatory PAF columns are kept; optional SAM-like tags beyond
column 12 are dropped on read and never written. Coordinates are 0-based
half-open, as in minimap2/GraphMap output.
"""

import logging
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Literal, TextIO

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from readsift.core.errors import PafParseError, ReadLengthConflictError
from readsift.core.validation import InputValidator

logger = logging.getLogger(__name__)

PAF_COLUMNS = (
    "qname",
    "qlen",
    "qstart",
    "qend",
    "strand",
    "tname",
    "tlen",
    "tstart",
    "tend",
    "nmatch",
    "alnlen",
    "mapq",
)
_INT_COLUMNS = frozenset(PAF_COLUMNS) - {"qname", "strand", "tname"}


class OverlapRecord(BaseModel):
    """One pairwise read overlap (a PAF row)."""

    model_config = ConfigDict(frozen=True)

    qname: str = Field(..., min_length=1)
    qlen: int = Field(..., gt=0)
    qstart: int = Field(..., ge=0)
    qend: int
    strand: Literal["+", "-"]
    tname: str = Field(..., min_length=1)
    tlen: int = Field(..., gt=0)
    tstart: int = Field(..., ge=0)
    tend: int
    nmatch: int = Field(..., ge=0)
    alnlen: int = Field(..., ge=0)
    mapq: int = Field(..., ge=0, le=255)

    @model_validator(mode="after")
    def check_intervals(self) -> "OverlapRecord":
        if not self.qstart < self.qend <= self.qlen:
            raise ValueError(
                f"query interval [{self.qstart}, {self.qend}) out of range for length {self.qlen}"
            )
        if not self.tstart < self.tend <= self.tlen:
            raise ValueError(
                f"target interval [{self.tstart}, {self.tend}) out of range for length {self.tlen}"
            )
        if self.nmatch > self.alnlen:
            raise ValueError(f"nmatch {self.nmatch} exceeds alnlen {self.alnlen}")
        return self

    @property
    def is_self_overlap(self) -> bool:
        """True when a read is aligned against itself; coverage skips these."""
        return self.qname == self.tname

    @property
    def read_pair(self) -> tuple[str, str]:
        return self.qname, self.tname

    def to_line(self) -> str:
        """Render the record as a 12-column PAF line (no newline)."""
        return "\t".join(str(getattr(self, column)) for column in PAF_COLUMNS)


class ReadTable:
    """
    Map of read id -> read length (bases).

    Every read id that appears in an overlap, as query or target, is present
    with the single length all of its records agree on.
    """

    def __init__(self, lengths: dict[str, int] | None = None) -> None:
        self._lengths: dict[str, int] = {}
        self._validator = InputValidator()
        for read_id, length in (lengths or {}).items():
            self.add(read_id, length)

    def add(self, read_id: str, length: int, line_number: int = 0) -> None:
        """
        Register a read length.

        Raises:
            ReadLengthConflictError: If the read is already known with another length
            ValueError: If the id is malformed or the length is not positive
        """
        known = self._lengths.get(read_id)
        if known is None:
            if length <= 0:
                raise ValueError(f"read '{read_id}' must have a positive length, got {length}")
            self._lengths[self._validator.validate_read_id(read_id)] = length
        elif known != length:
            raise ReadLengthConflictError(line_number, read_id, known, length)

    def __getitem__(self, read_id: str) -> int:
        return self._lengths[read_id]

    def __contains__(self, read_id: object) -> bool:
        return read_id in self._lengths

    def __len__(self) -> int:
        return len(self._lengths)

    def __iter__(self) -> Iterator[str]:
        return iter(self._lengths)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReadTable):
            return NotImplemented
        return self._lengths == other._lengths

    def __repr__(self) -> str:
        return f"ReadTable({len(self)} reads)"

    def items(self) -> Iterator[tuple[str, int]]:
        return iter(self._lengths.items())

    def as_dict(self) -> dict[str, int]:
        return dict(self._lengths)


def _parse_line(line: str, line_number: int) -> OverlapRecord:
    fields = line.rstrip("\r\n").split("\t")
    if len(fields) < len(PAF_COLUMNS):
        raise PafParseError(
            line_number, f"expected at least {len(PAF_COLUMNS)} tab-separated fields, got {len(fields)}"
        )

    values: dict[str, object] = {}
    for column, raw in zip(PAF_COLUMNS, fields, strict=False):
        if column in _INT_COLUMNS:
            try:
                values[column] = int(raw)
            except ValueError:
                raise PafParseError(line_number, f"column '{column}' is not an integer: {raw!r}") from None
        else:
            values[column] = raw

    try:
        return OverlapRecord.model_validate(values)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "record"
        raise PafParseError(line_number, f"{where}: {first['msg']}") from None


def parse_paf(stream: Iterable[str]) -> tuple[list[OverlapRecord], ReadTable]:
    """
    Parse PAF text into overlap records and a read-length table.

    Args:
        stream: Any iterable of lines (an open file, ``io.StringIO``, a list)

    Returns:
        Records in input order, and the table of every query/target length

    Raises:
        PafParseError: On a malformed line (the 1-based line number is reported)
        ReadLengthConflictError: When a read id carries two different lengths
    """
    records: list[OverlapRecord] = []
    reads = ReadTable()
    self_overlaps = 0

    for line_number, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        record = _parse_line(line, line_number)
        try:
            reads.add(record.qname, record.qlen, line_number)
            reads.add(record.tname, record.tlen, line_number)
        except ValueError as e:
            raise PafParseError(line_number, str(e)) from None
        if record.is_self_overlap:
            self_overlaps += 1
        records.append(record)

    if self_overlaps:
        logger.info("Parsed %d self-overlaps; coverage building skips them", self_overlaps)
    logger.debug("Parsed %d overlaps over %d reads", len(records), len(reads))
    return records, reads


def write_paf(records: Iterable[OverlapRecord]) -> str:
    """Render records as PAF text, one newline-terminated line per record."""
    return "".join(record.to_line() + "\n" for record in records)


def dump_paf(records: Iterable[OverlapRecord], handle: TextIO) -> None:
    """Write records as PAF to an open text handle."""
    for record in records:
        handle.write(record.to_line() + "\n")


def read_paf(path: Path) -> tuple[list[OverlapRecord], ReadTable]:
    """Parse a PAF file from disk."""
    with open(path, encoding="utf-8") as f:
        return parse_paf(f)


def save_paf(records: Iterable[OverlapRecord], path: Path) -> None:
    """Write records to a PAF file."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        dump_paf(records, f)
