"""
Per-read coverage graphs.

The depth at base ``i`` of read ``r`` is the number of non-self overlap
records whose interval on ``r`` contains ``i``. Each record adds one to the
query interval of its query read and one to the target interval of its
target read. Duplicate records are counted every time they appear.
"""

import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

import numpy as np

from readsift.core.errors import DataError, UnknownReadError
from readsift.genomics.overlaps import OverlapRecord, ReadTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CoverageGraph:
    """Integer depth per base of one read."""

    read_id: str
    depth: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.depth.ndim != 1:
            raise DataError(f"coverage of '{self.read_id}' must be one-dimensional")
        if self.depth.size and self.depth.min() < 0:
            raise DataError(f"coverage of '{self.read_id}' has negative depth")

    @property
    def length(self) -> int:
        return int(self.depth.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoverageGraph):
            return NotImplemented
        return self.read_id == other.read_id and np.array_equal(self.depth, other.depth)


def _intervals_by_read(
    records: Iterable[OverlapRecord], reads: ReadTable, min_mapq: int
) -> dict[str, list[tuple[int, int]]]:
    intervals: dict[str, list[tuple[int, int]]] = defaultdict(list)
    for record in records:
        for read_id in record.read_pair:
            if read_id not in reads:
                raise UnknownReadError(read_id)
        if record.is_self_overlap or record.mapq < min_mapq:
            continue
        intervals[record.qname].append((record.qstart, record.qend))
        intervals[record.tname].append((record.tstart, record.tend))
    return intervals


def _filter_mapq(records: Iterable[OverlapRecord], min_mapq: int) -> Iterator[OverlapRecord]:
    for record in records:
        if record.mapq >= min_mapq:
            yield record


def build_coverage(
    records: Iterable[OverlapRecord], reads: ReadTable, min_mapq: int = 0
) -> dict[str, CoverageGraph]:
    """
    Build coverage graphs with a difference array and a prefix sum.

    Args:
        records: Overlap records (self-overlaps are skipped)
        reads: Length table; every read gets a graph, even with no overlaps
        min_mapq: Records below this mapping quality are ignored

    Returns:
        Read id -> CoverageGraph, in read-table order

    Raises:
        UnknownReadError: If a record names a read absent from ``reads``
    """
    intervals = _intervals_by_read(records, reads, min_mapq)

    graphs: dict[str, CoverageGraph] = {}
    for read_id, length in reads.items():
        diff = np.zeros(length + 1, dtype=np.int64)
        spans = intervals.get(read_id)
        if spans:
            bounds = np.asarray(spans, dtype=np.int64)
            np.add.at(diff, bounds[:, 0], 1)
            np.add.at(diff, bounds[:, 1], -1)
        graphs[read_id] = CoverageGraph(read_id, np.cumsum(diff[:-1]))
    logger.debug("Built coverage for %d reads", len(graphs))
    return graphs


def coverage_oracle(
    records: Iterable[OverlapRecord], reads: ReadTable, min_mapq: int = 0
) -> dict[str, CoverageGraph]:
    """Per-position counting reference for ``build_coverage``."""
    records = list(records)
    for record in records:
        for read_id in record.read_pair:
            if read_id not in reads:
                raise UnknownReadError(read_id)
    records = list(_filter_mapq(records, min_mapq))

    graphs: dict[str, CoverageGraph] = {}
    for read_id, length in reads.items():
        depth = np.zeros(length, dtype=np.int64)
        for i in range(length):
            count = 0
            for record in records:
                if record.is_self_overlap:
                    continue
                if record.qname == read_id and record.qstart <= i < record.qend:
                    count += 1
                if record.tname == read_id and record.tstart <= i < record.tend:
                    count += 1
            depth[i] = count
        graphs[read_id] = CoverageGraph(read_id, depth)
    return graphs


def dump_coverage(graphs: Iterable[CoverageGraph], handle: TextIO) -> None:
    """Write ``read_id<TAB>d0,d1,...`` lines."""
    for graph in graphs:
        handle.write(f"{graph.read_id}\t{','.join(map(str, graph.depth.tolist()))}\n")


def save_coverage(graphs: Iterable[CoverageGraph], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        dump_coverage(graphs, f)


def load_coverage(path: Path) -> dict[str, CoverageGraph]:
    """Read a coverage dump written by ``save_coverage``."""
    graphs: dict[str, CoverageGraph] = {}
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            read_id, sep, values = line.rstrip("\n").partition("\t")
            if not sep:
                raise DataError(f"{path}:{line_number}: expected read_id<TAB>depths")
            try:
                depth = np.array([int(v) for v in values.split(",")] if values else [], dtype=np.int64)
            except ValueError:
                raise DataError(f"{path}:{line_number}: depths must be integers") from None
            graphs[read_id] = CoverageGraph(read_id, depth)
    return graphs
