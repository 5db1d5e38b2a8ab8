"""
Apply read classifications to an overlap set and score assembled contigs.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from Bio.SeqIO.FastaIO import SimpleFastaParser

from readsift.core.errors import DataError
from readsift.core.labels import ReadClass
from readsift.genomics.overlaps import OverlapRecord

logger = logging.getLogger(__name__)

_REPEAT_PAIR = frozenset({ReadClass.LEFT_REPEAT, ReadClass.RIGHT_REPEAT})


@dataclass(frozen=True)
class FilterReport:
    reads_dropped: int
    overlaps_dropped_chimeric: int
    overlaps_dropped_repeat_pair: int
    overlaps_kept: int

    @property
    def overlaps_total(self) -> int:
        return self.overlaps_kept + self.overlaps_dropped_chimeric + self.overlaps_dropped_repeat_pair


def filter_overlaps(
    records: Sequence[OverlapRecord], classifications: Mapping[str, ReadClass]
) -> tuple[list[OverlapRecord], FilterReport]:
    """
    Drop overlaps that would mislead an overlap-layout-consensus assembler.

    Every record touching a chimeric read is removed, and so is every record
    joining a left_repeat read with a right_repeat read (either order).
    Reads with no classification count as regular.

    Returns:
        Kept records in input order, and the drop counts
    """
    missing: set[str] = set()

    def class_of(read_id: str) -> ReadClass:
        cls = classifications.get(read_id)
        if cls is None:
            missing.add(read_id)
            return ReadClass.REGULAR
        return ReadClass(cls)

    kept: list[OverlapRecord] = []
    dropped_chimeric = 0
    dropped_repeat = 0
    chimeric_reads: set[str] = set()
    for record in records:
        pair = tuple(class_of(read_id) for read_id in record.read_pair)
        if ReadClass.CHIMERIC in pair:
            dropped_chimeric += 1
            chimeric_reads.update(r for r, c in zip(record.read_pair, pair, strict=True) if c is ReadClass.CHIMERIC)
        elif frozenset(pair) == _REPEAT_PAIR:
            dropped_repeat += 1
        else:
            kept.append(record)

    if missing:
        logger.warning("%d reads have no classification and are treated as regular", len(missing))

    report = FilterReport(
        reads_dropped=len(chimeric_reads),
        overlaps_dropped_chimeric=dropped_chimeric,
        overlaps_dropped_repeat_pair=dropped_repeat,
        overlaps_kept=len(kept),
    )
    logger.info(
        "Kept %d of %d overlaps (%d chimeric reads removed)",
        report.overlaps_kept,
        report.overlaps_total,
        report.reads_dropped,
    )
    return kept, report


def blacklist(classifications: Mapping[str, ReadClass]) -> list[str]:
    """Ids of reads an assembler should ignore, in classification order."""
    return [read_id for read_id, cls in classifications.items() if ReadClass(cls) is ReadClass.CHIMERIC]


def save_blacklist(read_ids: Iterable[str], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for read_id in read_ids:
            f.write(f"{read_id}\n")


# ============================================================================
# Contig statistics
# ============================================================================


@dataclass(frozen=True)
class ContigStats:
    """Contig count and NG50; ``ng50`` is None when the contigs cover less than half the genome."""

    n_contigs: int
    ng50: int | None

    @property
    def defined(self) -> bool:
        return self.ng50 is not None

    def to_line(self) -> str:
        return f"{self.n_contigs}\t{self.ng50 if self.ng50 is not None else 'undefined'}"


def ng50(contig_lengths: Sequence[int], genome_length: int) -> ContigStats:
    """
    Length of the shortest contig that, with all longer ones, covers at least
    half of the reference genome.
    """
    if genome_length <= 0:
        raise ValueError(f"genome length must be positive, got {genome_length}")
    if any(length <= 0 for length in contig_lengths):
        raise ValueError("contig lengths must be positive")

    running = 0
    for length in sorted(contig_lengths, reverse=True):
        running += length
        if 2 * running >= genome_length:
            return ContigStats(len(contig_lengths), length)
    return ContigStats(len(contig_lengths), None)


def read_contig_lengths(path: Path) -> list[int]:
    """
    Contig lengths from a FASTA file or a plain one-length-per-line file.

    The format is sniffed from the first non-blank character (``>`` means FASTA).
    """
    with open(path, encoding="utf-8") as f:
        text = f.read()

    if text.lstrip().startswith(">"):
        with open(path, encoding="utf-8") as f:
            return [len(sequence) for _, sequence in SimpleFastaParser(f) if sequence]

    lengths: list[int] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            length = int(line.split()[0])
        except ValueError:
            raise DataError(f"{path}:{line_number}: expected a contig length, got {line!r}") from None
        if length <= 0:
            raise DataError(f"{path}:{line_number}: contig length must be positive, got {length}")
        lengths.append(length)
    return lengths
