"""
Tests for overlap filtering, the blacklist and contig statistics.
"""

import itertools
from pathlib import Path

import pytest

from readsift.core.errors import DataError
from readsift.core.labels import ReadClass
from readsift.genomics.assembly import (
    ContigStats,
    blacklist,
    filter_overlaps,
    ng50,
    read_contig_lengths,
    save_blacklist,
)
from readsift.genomics.overlaps import OverlapRecord

LENGTH = 1000


def _record(q: str, t: str) -> OverlapRecord:
    return OverlapRecord(
        qname=q, qlen=LENGTH, qstart=0, qend=500, strand="+", tname=t, tlen=LENGTH,
        tstart=500, tend=1000, nmatch=500, alnlen=500, mapq=60,
    )


@pytest.fixture
def classes() -> dict[str, ReadClass]:
    return {
        "chim": ReadClass.CHIMERIC,
        "left": ReadClass.LEFT_REPEAT,
        "right": ReadClass.RIGHT_REPEAT,
        "reg": ReadClass.REGULAR,
        "reg2": ReadClass.REGULAR,
    }


# ============================================================================
# Overlap filtering
# ============================================================================


class TestFilterOverlaps:
    """Test suite for filter_overlaps."""

    def test_drops_chimeric_and_repeat_pairs(self, classes: dict[str, ReadClass]) -> None:
        """Test the two drop rules against a small overlap set."""
        records = [
            _record("chim", "reg"),
            _record("left", "right"),
            _record("right", "left"),
            _record("left", "reg"),
            _record("reg", "reg2"),
            _record("left", "left"),
        ]

        kept, report = filter_overlaps(records, classes)

        assert [r.read_pair for r in kept] == [("left", "reg"), ("reg", "reg2"), ("left", "left")]
        assert report.overlaps_dropped_chimeric == 1
        assert report.overlaps_dropped_repeat_pair == 2
        assert report.overlaps_kept == 3
        assert report.reads_dropped == 1
        assert report.overlaps_total == len(records)

    def test_unclassified_reads_are_regular(self) -> None:
        """Test that missing classifications keep the overlap."""
        kept, report = filter_overlaps([_record("x", "y")], {})

        assert len(kept) == 1
        assert report.reads_dropped == 0

    def test_idempotent(self, classes: dict[str, ReadClass]) -> None:
        """Test that filtering the kept set again removes nothing."""
        names = list(classes)
        records = [_record(q, t) for q, t in itertools.product(names, names) if q != t]

        kept, _ = filter_overlaps(records, classes)
        again, report = filter_overlaps(kept, classes)

        assert again == kept
        assert report.overlaps_dropped_chimeric == report.overlaps_dropped_repeat_pair == 0

    def test_no_chimeric_read_survives(self, classes: dict[str, ReadClass]) -> None:
        """Test that no kept record touches a chimeric read."""
        names = list(classes)
        records = [_record(q, t) for q, t in itertools.product(names, names) if q != t]

        kept, report = filter_overlaps(records, classes)

        assert all("chim" not in r.read_pair for r in kept)
        assert report.overlaps_dropped_chimeric == 8


class TestBlacklist:
    """Test suite for the chimeric read blacklist."""

    def test_only_chimeric(self, classes: dict[str, ReadClass]) -> None:
        """Test that only chimeric reads are listed."""
        assert blacklist(classes) == ["chim"]

    def test_save(self, tmp_path: Path) -> None:
        """Test the one-id-per-line output."""
        path = tmp_path / "blacklist.txt"

        save_blacklist(["a", "b"], path)

        assert path.read_text() == "a\nb\n"


# ============================================================================
# NG50
# ============================================================================


def _ng50_by_definition(lengths: list[int], genome: int) -> int | None:
    """Largest contig length L such that contigs of length >= L cover half the genome."""
    best = None
    for candidate in sorted(set(lengths)):
        if 2 * sum(x for x in lengths if x >= candidate) >= genome:
            best = candidate
    return best


class TestNg50:
    """Test suite for ng50."""

    def test_single_contig(self) -> None:
        """Test one contig covering the whole genome."""
        assert ng50([1000], 1000) == ContigStats(1, 1000)

    def test_hand_example(self) -> None:
        """Test that the running sum stops at half the genome."""
        stats = ng50([100, 500, 300], 1000)

        assert stats.to_line() == "3\t500"

    def test_exact_half(self) -> None:
        """Test that reaching exactly half the genome counts."""
        assert ng50([250, 250], 1000).ng50 == 250

    def test_undefined(self) -> None:
        """Test that contigs covering less than half leave NG50 undefined."""
        stats = ng50([100, 100], 1000)

        assert not stats.defined
        assert stats.to_line() == "2\tundefined"

    def test_no_contigs(self) -> None:
        """Test the empty assembly."""
        assert ng50([], 1000) == ContigStats(0, None)

    def test_invalid_genome_length(self) -> None:
        """Test that the genome length must be positive."""
        with pytest.raises(ValueError, match="genome length"):
            ng50([10], 0)

    @pytest.mark.parametrize(
        "lengths,genome",
        [
            ([5, 3, 3, 8, 1], 20),
            ([7, 7, 7], 40),
            ([1, 2, 3, 4, 5, 6, 7, 8, 9, 10], 50),
            ([12, 1, 1, 1], 10),
            ([2, 2, 2, 2], 17),
        ],
    )
    def test_matches_definition(self, lengths: list[int], genome: int) -> None:
        """Test the running-sum NG50 against the length-threshold definition."""
        assert ng50(lengths, genome).ng50 == _ng50_by_definition(lengths, genome)


class TestReadContigLengths:
    """Test suite for contig length files."""

    def test_fasta(self, tmp_path: Path) -> None:
        """Test lengths read from a FASTA file with wrapped sequences."""
        path = tmp_path / "contigs.fa"
        path.write_text(">c1 first\nACGT\nACG\n>c2\nAC\n")

        assert read_contig_lengths(path) == [7, 2]

    def test_plain_lengths(self, tmp_path: Path) -> None:
        """Test one length per line with comments and blank lines."""
        path = tmp_path / "lengths.txt"
        path.write_text("# contigs\n300\n\n500 c2\n")

        assert read_contig_lengths(path) == [300, 500]

    def test_bad_length(self, tmp_path: Path) -> None:
        """Test that non-numeric lines are data errors."""
        path = tmp_path / "lengths.txt"
        path.write_text("300\nabc\n")

        with pytest.raises(DataError, match=":2:"):
            read_contig_lengths(path)
