"""
Signal preparation: coverage graph -> fixed-length [0, 1] model input.

A read of ``n`` bases is cut into ``L`` bins by ``b = floor(i * L / n)``;
each bin holds the mean depth of its bases, and the binned vector is divided
by its maximum. Reads shorter than ``L`` and reads without coverage are
rejected and counted, never padded or invented.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from readsift.core.errors import DataError, ReadTooShortError, SignalRejectedError, ZeroCoverageError
from readsift.core.labels import ReadClass
from readsift.core.validation import InputValidator
from readsift.genomics.coverage import CoverageGraph

logger = logging.getLogger(__name__)

# Signal lengths that match the layer plans of the two model families
DEFAULT_LENGTH_CONV = 500
DEFAULT_LENGTH_GAN = 100


def default_length(kind: str) -> int:
    """Signal length a model kind is laid out for when none is given."""
    return DEFAULT_LENGTH_GAN if kind == "semigan" else DEFAULT_LENGTH_CONV


@dataclass(frozen=True, eq=False)
class Signal:
    """Fixed-length normalized coverage signal of one read."""

    read_id: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.values.ndim != 1 or self.values.size == 0:
            raise DataError(f"signal of '{self.read_id}' must be a non-empty vector")
        if not np.all(np.isfinite(self.values)):
            raise DataError(f"signal of '{self.read_id}' contains non-finite values")
        if self.values.min() < 0.0 or self.values.max() > 1.0:
            raise DataError(f"signal of '{self.read_id}' leaves the [0, 1] range")

    @property
    def length(self) -> int:
        return int(self.values.size)

    def reversed(self) -> "Signal":
        return Signal(self.read_id, self.values[::-1].copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return self.read_id == other.read_id and np.array_equal(self.values, other.values)


@dataclass
class PrepReport:
    """Reads excluded during preparation, by reason."""

    rejected: dict[str, str] = field(default_factory=dict)

    def add(self, error: SignalRejectedError) -> None:
        self.rejected[error.read_id] = error.reason

    @property
    def counts(self) -> dict[str, int]:
        return dict(Counter(self.rejected.values()))

    def __len__(self) -> int:
        return len(self.rejected)


def downsample(cov: CoverageGraph, length: int) -> np.ndarray:
    """
    Bin-mean down-sampling of a coverage graph to ``length`` values.

    Raises:
        ReadTooShortError: If the read has fewer bases than ``length``
    """
    if length < 1:
        raise ValueError(f"signal length must be >= 1, got {length}")
    n = cov.length
    if n < length:
        raise ReadTooShortError(cov.read_id, f"read of {n} bases is shorter than signal length {length}")

    bins = (np.arange(n, dtype=np.int64) * length) // n
    sums = np.bincount(bins, weights=cov.depth.astype(np.float64), minlength=length)
    counts = np.bincount(bins, minlength=length)
    return sums / counts


def normalize(values: np.ndarray, read_id: str = "<signal>") -> np.ndarray:
    """
    Divide by the maximum so the result lies in [0, 1] with max exactly 1.

    Raises:
        ZeroCoverageError: If every value is zero
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot normalize an empty vector")
    peak = values.max()
    if peak <= 0.0:
        raise ZeroCoverageError(read_id, "zero coverage")
    return values / peak


def prepare(cov: CoverageGraph, length: int) -> Signal:
    """Down-sample then normalize one coverage graph."""
    return Signal(cov.read_id, normalize(downsample(cov, length), cov.read_id))


def prepare_all(graphs: Iterable[CoverageGraph], length: int) -> tuple[list[Signal], PrepReport]:
    """
    Prepare a batch, recording rejected reads instead of failing.

    Returns:
        Signals in input order, and the rejection report
    """
    signals: list[Signal] = []
    report = PrepReport()
    for graph in graphs:
        try:
            signals.append(prepare(graph, length))
        except SignalRejectedError as e:
            report.add(e)

    if report:
        logger.warning(
            "Excluded %d of %d reads during preparation: %s",
            len(report),
            len(signals) + len(report),
            ", ".join(f"{reason}={count}" for reason, count in sorted(report.counts.items())),
        )
    return signals, report


# ============================================================================
# Signal and label files
# ============================================================================


def format_real(value: float) -> str:
    """Decimal rendering used by every real-valued TSV (9 significant digits)."""
    return f"{value:.9g}"


def save_signals(signals: Iterable[Signal], path: Path) -> None:
    """Write ``read_id<TAB>v0,v1,...`` lines."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for signal in signals:
            f.write(f"{signal.read_id}\t{','.join(format_real(v) for v in signal.values.tolist())}\n")


def load_signals(path: Path) -> list[Signal]:
    validator = InputValidator()
    signals: list[Signal] = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            read_id, sep, raw = line.rstrip("\n").partition("\t")
            if not sep or not raw:
                raise DataError(f"{path}:{line_number}: expected read_id<TAB>v0,v1,...")
            try:
                validator.validate_read_id(read_id)
                values = np.array([float(v) for v in raw.split(",")], dtype=np.float64)
            except ValueError as e:
                raise DataError(f"{path}:{line_number}: {e}") from None
            signals.append(Signal(read_id, values))
    return signals


def save_labels(labels: Mapping[str, ReadClass], path: Path) -> None:
    """Write ``read_id<TAB>label`` lines."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for read_id, label in labels.items():
            f.write(f"{read_id}\t{ReadClass(label).value}\n")


def load_labels(path: Path) -> dict[str, ReadClass]:
    labels: dict[str, ReadClass] = {}
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) < 2:
                raise DataError(f"{path}:{line_number}: expected read_id<TAB>label")
            try:
                labels[fields[0]] = ReadClass(fields[1])
            except ValueError:
                valid = ", ".join(c.value for c in ReadClass)
                raise DataError(f"{path}:{line_number}: unknown label '{fields[1]}' (valid: {valid})") from None
    return labels
