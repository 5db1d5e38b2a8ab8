"""
Rule-based class guesser used to balance the unlabeled pool.

The rules look only at the shape of a prepared signal: a deep dip inside the
read with solid coverage on both sides reads as chimeric, and a clearly
heavier left or right side reads as a repeat. The guesses are unreliable and
are never used as evaluation truth.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from readsift.core.labels import CLASSES, ReadClass
from readsift.genomics.signals import Signal

logger = logging.getLogger(__name__)


class HeuristicParams(BaseModel):
    """Thresholds of the heuristic labeler; fractions are relative to L."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    smooth_window: float = Field(0.05, gt=0.0, le=0.5)
    edge_margin: float = Field(0.10, gt=0.0, le=0.5)
    drop_ratio: float = Field(0.3, gt=0.0, lt=1.0)
    repeat_ratio: float = Field(1.8, gt=1.0)
    side_fraction: float = Field(0.4, gt=0.0, le=0.5)
    min_flank: float = Field(0.15, ge=0.0)


def _count(fraction: float, length: int) -> int:
    # tolerance keeps 0.1 * 100 at 10 rather than 9 after float rounding
    return int(np.floor(fraction * length + 1e-9))


def smooth(values: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average; edges average over the in-range part only."""
    if window <= 1:
        return values.astype(np.float64, copy=True)
    kernel = np.ones(window)
    sums = np.convolve(values, kernel, mode="same")
    counts = np.convolve(np.ones_like(values), kernel, mode="same")
    return sums / counts


def smoothing_window(p: HeuristicParams, length: int) -> int:
    """Odd window width closest to ``smooth_window * L`` from below."""
    width = max(1, _count(p.smooth_window, length))
    return width if width % 2 == 1 else width - 1


def _is_chimeric(smoothed: np.ndarray, p: HeuristicParams) -> bool:
    length = smoothed.size
    start = _count(p.edge_margin, length)
    stop = length - start
    if stop - start < 3:
        return False

    interior = smoothed[start:stop]
    pivot = int(np.argmin(interior))
    dip = interior[pivot]
    left = interior[:pivot]
    right = interior[pivot + 1 :]
    if left.size == 0 or right.size == 0:
        return False

    flank_left = float(left.mean())
    flank_right = float(right.mean())
    if flank_left < p.min_flank or flank_right < p.min_flank:
        return False
    return bool(dip < p.drop_ratio * min(flank_left, flank_right))


def heuristic_label(sig: Signal, p: HeuristicParams | None = None) -> ReadClass:
    """
    Guess the class of a signal from its shape.

    Steps: smooth; look for a deep interior minimum with solid flanks
    (chimeric); otherwise compare the means of the outer side windows
    (left/right repeat); otherwise regular.
    """
    p = p or HeuristicParams()
    values = sig.values
    length = values.size

    if _is_chimeric(smooth(values, smoothing_window(p, length)), p):
        return ReadClass.CHIMERIC

    side = max(1, _count(p.side_fraction, length))
    mean_left = float(values[:side].mean())
    mean_right = float(values[-side:].mean())
    if mean_right > p.repeat_ratio * mean_left:
        return ReadClass.RIGHT_REPEAT
    if mean_left > p.repeat_ratio * mean_right:
        return ReadClass.LEFT_REPEAT
    return ReadClass.REGULAR


def heuristic_labels(signals: Iterable[Signal], p: HeuristicParams | None = None) -> dict[str, ReadClass]:
    """Label every signal; returns read id -> guessed class."""
    return {signal.read_id: heuristic_label(signal, p) for signal in signals}


def balance_pool(
    signals: Sequence[Signal],
    p: HeuristicParams | None,
    quota: Mapping[ReadClass, int],
    seed: int,
) -> list[Signal]:
    """
    Draw a class-balanced pool using heuristic labels.

    Each heuristic class contributes ``min(quota, members)`` signals drawn
    uniformly without replacement. Classes missing from ``quota`` contribute
    nothing. The selection keeps input order and depends only on ``seed``.
    """
    for cls, count in quota.items():
        if count < 0:
            raise ValueError(f"quota for {cls} must be >= 0, got {count}")

    members: dict[ReadClass, list[int]] = {cls: [] for cls in CLASSES}
    for index, signal in enumerate(signals):
        members[heuristic_label(signal, p)].append(index)

    rng = np.random.default_rng(seed)
    chosen: list[int] = []
    for cls in CLASSES:
        pool = members[cls]
        take = min(quota.get(cls, 0), len(pool))
        if take < quota.get(cls, 0):
            logger.info("Heuristic class %s has %d members, below quota %d", cls, len(pool), quota[cls])
        if take:
            picks = rng.choice(len(pool), size=take, replace=False)
            chosen.extend(pool[i] for i in picks)

    return [signals[i] for i in sorted(chosen)]
