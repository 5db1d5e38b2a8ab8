"""
Synthetic data for desk-scale runs of every pipeline stage.

Two generators:

- ``synth_signals`` draws prepared signals directly from class prototypes
  (flat, notched, one side boosted) with additive noise.
- ``synth_pipeline`` samples reads on a linear genome, optionally fusing two
  distant intervals (chimeras) and duplicating a segment (repeat), and emits
  the overlaps an overlapper would report between them.

Every item draws from its own ``SeedSequence([seed, ...index])`` stream, so an
item does not depend on how many items were generated before it.
"""

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from readsift.core.errors import InfeasibleParametersError
from readsift.core.labels import CLASSES, ReadClass
from readsift.genomics.overlaps import OverlapRecord, ReadTable
from readsift.genomics.signals import Signal

logger = logging.getLogger(__name__)

FloatRange = tuple[float, float]

_STREAM_CHIMERA_PICK = 1
_STREAM_READ = 2


def _ordered(name: str, bounds: FloatRange) -> None:
    low, high = bounds
    if low > high:
        raise ValueError(f"{name} range must be ordered, got {bounds}")


class SynthConfig(BaseModel):
    """Class prototypes and noise of ``synth_signals``."""

    model_config = ConfigDict(frozen=True)

    length: int = Field(500, ge=8)
    per_class: dict[ReadClass, int] = Field(default_factory=lambda: {cls: 100 for cls in CLASSES})
    base_level: FloatRange = (0.3, 0.8)
    notch_width: FloatRange = (0.05, 0.08)
    notch_depth: float = Field(0.1, ge=0.0, le=1.0)
    notch_center: FloatRange = (0.3, 0.7)
    repeat_boost: FloatRange = (2.0, 4.0)
    repeat_boundary: FloatRange = (0.35, 0.65)
    taper_fraction: float = Field(0.05, ge=0.0, le=0.5)
    taper_floor: float = Field(0.5, gt=0.0, le=1.0)
    noise_sigma: float = Field(0.03, ge=0.0)
    seed: int = 0

    @model_validator(mode="after")
    def check_ranges(self) -> Self:
        _ordered("base_level", self.base_level)
        _ordered("notch_width", self.notch_width)
        _ordered("notch_center", self.notch_center)
        _ordered("repeat_boost", self.repeat_boost)
        _ordered("repeat_boundary", self.repeat_boundary)
        if self.base_level[0] <= 0.0:
            raise ValueError("base_level must be positive")
        if any(count < 0 for count in self.per_class.values()):
            raise ValueError("per_class counts must be >= 0")
        return self


def _uniform(rng: np.random.Generator, bounds: FloatRange) -> float:
    return float(rng.uniform(bounds[0], bounds[1])) if bounds[1] > bounds[0] else float(bounds[0])


def _regular_shape(rng: np.random.Generator, cfg: SynthConfig) -> np.ndarray:
    base = _uniform(rng, cfg.base_level)
    shape = np.full(cfg.length, base)
    taper = int(math.floor(cfg.taper_fraction * cfg.length + 1e-9))
    if taper:
        ramp = np.linspace(cfg.taper_floor, 1.0, taper + 1)[:-1]
        shape[:taper] *= ramp
        shape[-taper:] *= ramp[::-1]
    return shape


def _notch(shape: np.ndarray, rng: np.random.Generator, cfg: SynthConfig) -> np.ndarray:
    length = shape.size
    width = max(1, math.ceil(_uniform(rng, cfg.notch_width) * length))
    center = _uniform(rng, cfg.notch_center) * length
    start = min(max(0, int(round(center - width / 2))), length - width)
    depth = float(rng.uniform(0.0, cfg.notch_depth))
    shape[start : start + width] *= depth
    return shape


def _boost_right(shape: np.ndarray, rng: np.random.Generator, cfg: SynthConfig) -> np.ndarray:
    boundary = math.ceil(_uniform(rng, cfg.repeat_boundary) * shape.size)
    shape[boundary:] *= _uniform(rng, cfg.repeat_boost)
    return shape


def prototype(cls: ReadClass, rng: np.random.Generator, cfg: SynthConfig) -> np.ndarray:
    """Noise-free shape of one class, with values <= 1."""
    shape = _regular_shape(rng, cfg)
    if cls is ReadClass.CHIMERIC:
        shape = _notch(shape, rng, cfg)
    elif cls in (ReadClass.RIGHT_REPEAT, ReadClass.LEFT_REPEAT):
        shape = _boost_right(shape, rng, cfg)
        if cls is ReadClass.LEFT_REPEAT:
            shape = shape[::-1].copy()

    peak = shape.max()
    if peak > 1.0:
        shape = shape / peak
    return shape


def synth_signal(cls: ReadClass, index: int, cfg: SynthConfig) -> Signal:
    """Generate item ``index`` of class ``cls``; independent of other items."""
    rng = np.random.default_rng([cfg.seed, cls.index, index])
    values = prototype(cls, rng, cfg)
    if cfg.noise_sigma > 0.0:
        values = np.clip(values + rng.normal(0.0, cfg.noise_sigma, values.size), 0.0, 1.0)

    peak = values.max()
    values = values / peak if peak > 0.0 else np.ones_like(values)
    return Signal(f"synth_{cls.value}_{index:05d}", values)


def synth_signals(cfg: SynthConfig) -> tuple[list[Signal], dict[str, ReadClass]]:
    """
    Generate labeled synthetic signals, grouped by class in class order.

    Returns:
        Signals, and read id -> true class
    """
    signals: list[Signal] = []
    labels: dict[str, ReadClass] = {}
    for cls in CLASSES:
        for index in range(cfg.per_class.get(cls, 0)):
            signal = synth_signal(cls, index, cfg)
            signals.append(signal)
            labels[signal.read_id] = cls
    return signals, labels


# ============================================================================
# Coordinate-true reads and overlaps
# ============================================================================


class RepeatSpec(BaseModel):
    """A genome segment ``[start, start + length)`` duplicated at ``copy_start``."""

    model_config = ConfigDict(frozen=True)

    start: int = Field(..., ge=0)
    length: int = Field(..., gt=0)
    copy_start: int = Field(..., ge=0)

    @property
    def copies(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.start, self.start + self.length), (self.copy_start, self.copy_start + self.length)


class PipelineSpec(BaseModel):
    """Parameters of ``synth_pipeline``."""

    model_config = ConfigDict(frozen=True)

    genome_length: int = Field(200_000, gt=0)
    n_reads: int = Field(400, ge=0)
    read_length: tuple[int, int] = (8_000, 12_000)
    chimera_rate: float = Field(0.05, ge=0.0, le=1.0)
    repeat: RepeatSpec | None = None
    min_overlap: int = Field(500, gt=0)
    seed: int = 0

    @model_validator(mode="after")
    def check_feasible(self) -> Self:
        low, high = self.read_length
        if not 0 < low <= high:
            raise ValueError(f"read_length must satisfy 0 < min <= max, got {self.read_length}")
        return self


@dataclass(frozen=True)
class _Piece:
    """A genome interval carried by a read; flags mark real read ends."""

    start: int
    end: int
    offset: int
    true_left: bool
    true_right: bool


@dataclass(frozen=True)
class SyntheticRead:
    read_id: str
    pieces: tuple[_Piece, ...]
    chimeric: bool

    @property
    def length(self) -> int:
        return sum(piece.end - piece.start for piece in self.pieces)


@dataclass(frozen=True)
class _Segment:
    start: int
    end: int
    true_left: bool
    true_right: bool
    piece: _Piece
    shift: int

    def read_coordinate(self, genome_position: int) -> int:
        return self.piece.offset + (genome_position - self.shift - self.piece.start)


def _segments(read: SyntheticRead, clip: tuple[int, int] | None = None, shift: int = 0) -> Iterator[_Segment]:
    for piece in read.pieces:
        start, end = piece.start, piece.end
        true_left, true_right = piece.true_left, piece.true_right
        if clip is not None:
            low, high = clip
            if end <= low or start >= high:
                continue
            if start < low:
                start, true_left = low, False
            if end > high:
                end, true_right = high, False
        yield _Segment(start + shift, end + shift, true_left, true_right, piece, shift)


def _shared(x: _Segment, y: _Segment, min_overlap: int) -> tuple[int, int] | None:
    start = max(x.start, y.start)
    end = min(x.end, y.end)
    if end - start < min_overlap:
        return None
    # an overlapper only reports alignments that run into a real read end on each side
    left_ok = (x.start == start and x.true_left) or (y.start == start and y.true_left)
    right_ok = (x.end == end and x.true_right) or (y.end == end and y.true_right)
    if not (left_ok and right_ok):
        return None
    return start, end


def _sample_read(index: int, spec: PipelineSpec, chimeric: bool) -> SyntheticRead:
    rng = np.random.default_rng([spec.seed, _STREAM_READ, index])
    genome = spec.genome_length
    length = int(rng.integers(spec.read_length[0], spec.read_length[1] + 1))
    read_id = f"read_{index:05d}"

    if not chimeric:
        start = int(rng.integers(0, genome - length + 1))
        return SyntheticRead(read_id, (_Piece(start, start + length, 0, True, True),), False)

    first = max(1, int(length * rng.uniform(0.3, 0.7)))
    second = length - first
    gap = genome // 10
    for _ in range(1000):
        start1 = int(rng.integers(0, genome - first + 1))
        start2 = int(rng.integers(0, genome - second + 1))
        if start2 + second + gap <= start1 or start2 >= start1 + first + gap:
            return SyntheticRead(
                read_id,
                (
                    _Piece(start1, start1 + first, 0, True, False),
                    _Piece(start2, start2 + second, first, False, True),
                ),
                True,
            )
    raise InfeasibleParametersError(
        f"could not place a fused read of {length} bases with pieces {gap} bases apart "
        f"on a genome of {genome} bases"
    )


def _label(read: SyntheticRead, spec: PipelineSpec) -> ReadClass:
    if read.chimeric:
        return ReadClass.CHIMERIC
    if spec.repeat is None:
        return ReadClass.REGULAR

    piece = read.pieces[0]
    for low, high in spec.repeat.copies:
        start, end = max(piece.start, low), min(piece.end, high)
        if end - start < spec.min_overlap:
            continue
        touches_left = start == piece.start
        touches_right = end == piece.end
        if touches_right and not touches_left:
            return ReadClass.RIGHT_REPEAT
        if touches_left and not touches_right:
            return ReadClass.LEFT_REPEAT
    return ReadClass.REGULAR


def _candidate_pairs(x: SyntheticRead, y: SyntheticRead, spec: PipelineSpec) -> Iterator[tuple[_Segment, _Segment]]:
    for sx in _segments(x):
        for sy in _segments(y):
            yield sx, sy
    if spec.repeat is not None:
        copy_a, copy_b = spec.repeat.copies
        shift = copy_a[0] - copy_b[0]
        for sx in _segments(x, copy_a):
            for sy in _segments(y, copy_b, shift):
                yield sx, sy
        for sx in _segments(x, copy_b):
            for sy in _segments(y, copy_a, -shift):
                yield sx, sy


def _check_spec(spec: PipelineSpec) -> None:
    genome = spec.genome_length
    if spec.read_length[1] > genome:
        raise InfeasibleParametersError(
            f"reads of up to {spec.read_length[1]} bases do not fit a genome of {genome} bases"
        )
    if spec.repeat is not None:
        (a0, a1), (b0, b1) = spec.repeat.copies
        if a1 > genome or b1 > genome:
            raise InfeasibleParametersError("repeat copies must lie inside the genome")
        if a0 < b1 and b0 < a1:
            raise InfeasibleParametersError("repeat copies must not overlap each other")


def synth_pipeline(spec: PipelineSpec) -> tuple[ReadTable, list[OverlapRecord], dict[str, ReadClass]]:
    """
    Sample reads on a linear genome and emit their overlaps.

    Returns:
        Read lengths, overlap records (one per shared interval, query index <
        target index), and read id -> construction-true class

    Raises:
        InfeasibleParametersError: If reads do not fit the genome, fused reads
            cannot be placed, or the repeat copies are malformed
    """
    _check_spec(spec)

    n_chimeric = int(round(spec.chimera_rate * spec.n_reads))
    pick = np.random.default_rng([spec.seed, _STREAM_CHIMERA_PICK])
    chimeric = set(pick.choice(spec.n_reads, size=n_chimeric, replace=False).tolist()) if n_chimeric else set()

    reads = [_sample_read(index, spec, index in chimeric) for index in range(spec.n_reads)]
    table = ReadTable({read.read_id: read.length for read in reads})
    labels = {read.read_id: _label(read, spec) for read in reads}

    records: list[OverlapRecord] = []
    for i, x in enumerate(reads):
        for y in reads[i + 1 :]:
            for sx, sy in _candidate_pairs(x, y, spec):
                shared = _shared(sx, sy, spec.min_overlap)
                if shared is None:
                    continue
                start, end = shared
                records.append(
                    OverlapRecord(
                        qname=x.read_id,
                        qlen=x.length,
                        qstart=sx.read_coordinate(start),
                        qend=sx.read_coordinate(end),
                        strand="+",
                        tname=y.read_id,
                        tlen=y.length,
                        tstart=sy.read_coordinate(start),
                        tend=sy.read_coordinate(end),
                        nmatch=end - start,
                        alnlen=end - start,
                        mapq=60,
                    )
                )

    logger.info(
        "Synthesized %d reads (%d fused) and %d overlaps", len(reads), n_chimeric, len(records)
    )
    return table, records, labels
