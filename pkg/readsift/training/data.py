"""
Training sets, class-stratified sampling and mini-batching.
"""

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from readsift.core.errors import DataError, InfeasibleParametersError
from readsift.core.labels import CLASSES, ReadClass
from readsift.genomics.signals import Signal


def _stack(signals: Sequence[Signal]) -> np.ndarray:
    if not signals:
        return np.zeros((0, 0))
    lengths = {s.length for s in signals}
    if len(lengths) != 1:
        raise DataError(f"signals have mixed lengths {sorted(lengths)}")
    return np.stack([s.values for s in signals])


@dataclass(frozen=True, eq=False)
class UnlabeledSet:
    ids: tuple[str, ...]
    x: np.ndarray

    @classmethod
    def from_signals(cls, signals: Sequence[Signal]) -> "UnlabeledSet":
        return cls(tuple(s.read_id for s in signals), _stack(signals))

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True, eq=False)
class LabeledSet:
    """Signals with class indices ``y`` (positions in ``CLASSES``)."""

    ids: tuple[str, ...]
    x: np.ndarray
    y: np.ndarray

    @classmethod
    def from_signals(cls, signals: Sequence[Signal], labels: Mapping[str, ReadClass]) -> "LabeledSet":
        """
        Raises:
            DataError: If a signal has no label
        """
        missing = [s.read_id for s in signals if s.read_id not in labels]
        if missing:
            raise DataError(f"{len(missing)} signals have no label (first: '{missing[0]}')")
        y = np.array([ReadClass(labels[s.read_id]).index for s in signals], dtype=np.int64)
        return cls(tuple(s.read_id for s in signals), _stack(signals), y)

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def labels(self) -> dict[str, ReadClass]:
        return {read_id: ReadClass.from_index(int(k)) for read_id, k in zip(self.ids, self.y, strict=True)}

    def subset(self, indices: Iterable[int]) -> "LabeledSet":
        idx = np.asarray(list(indices), dtype=np.int64)
        return LabeledSet(tuple(self.ids[i] for i in idx), self.x[idx], self.y[idx])

    def onehot(self, n_classes: int = len(CLASSES)) -> np.ndarray:
        return onehot(self.y, n_classes)

    def unlabeled(self) -> UnlabeledSet:
        return UnlabeledSet(self.ids, self.x)


def onehot(y: np.ndarray, n_classes: int) -> np.ndarray:
    out = np.zeros((len(y), n_classes))
    out[np.arange(len(y)), y] = 1.0
    return out


def check_disjoint(labeled: LabeledSet, unlabeled: UnlabeledSet) -> None:
    """
    Raises:
        DataError: If a read id is in both sets
    """
    shared = set(labeled.ids) & set(unlabeled.ids)
    if shared:
        raise DataError(f"{len(shared)} reads are both labeled and unlabeled (first: '{sorted(shared)[0]}')")


def stratified_sample(labeled: LabeledSet, n: int, rng: np.random.Generator) -> LabeledSet:
    """
    Draw ``n`` examples with classes as balanced as the data allows.

    Every class gets ``n // K``; the ``n % K`` leftover slots go to randomly
    chosen classes. A class short of members hands its shortfall to the
    others in class order.

    Raises:
        InfeasibleParametersError: If ``n`` exceeds the set size
    """
    if n > len(labeled):
        raise InfeasibleParametersError(f"cannot sample {n} labeled examples from {len(labeled)}")
    k = len(CLASSES)
    members = [np.flatnonzero(labeled.y == c) for c in range(k)]
    quota = np.full(k, n // k)
    quota[rng.permutation(k)[: n % k]] += 1

    shortfall = 0
    for c in range(k):
        if quota[c] > len(members[c]):
            shortfall += quota[c] - len(members[c])
            quota[c] = len(members[c])
    for c in range(k):
        extra = min(shortfall, len(members[c]) - quota[c])
        quota[c] += extra
        shortfall -= extra

    chosen = [rng.choice(members[c], size=int(quota[c]), replace=False) for c in range(k) if quota[c]]
    return labeled.subset(sorted(np.concatenate(chosen).tolist()) if chosen else [])


def split_validation(
    labeled: LabeledSet, fraction: float, rng: np.random.Generator
) -> tuple[LabeledSet, LabeledSet | None]:
    """
    Hold out ``floor(fraction * count)`` examples of each class for validation.

    Classes with a single example stay entirely in the training part.
    Returns ``(train, None)`` when nothing is held out.
    """
    held: list[int] = []
    for c in range(len(CLASSES)):
        members = np.flatnonzero(labeled.y == c)
        take = min(int(np.floor(fraction * len(members))), len(members) - 1)
        if take > 0:
            held.extend(rng.choice(members, size=take, replace=False).tolist())
    if not held:
        return labeled, None
    held_set = set(held)
    train = [i for i in range(len(labeled)) if i not in held_set]
    return labeled.subset(train), labeled.subset(sorted(held))


def batches(n: int, batch_size: int, rng: np.random.Generator) -> list[np.ndarray]:
    """
    Shuffled index batches covering ``range(n)`` once.

    A trailing batch of one is merged into the previous one, since batch
    normalization needs at least two examples.
    """
    order = rng.permutation(n)
    chunks = [order[i : i + batch_size] for i in range(0, n, batch_size)]
    if len(chunks) > 1 and len(chunks[-1]) == 1:
        chunks[-2] = np.concatenate([chunks[-2], chunks[-1]])
        chunks.pop()
    return chunks


class Cycler:
    """Endless stream of shuffled batches over a small set (labeled data in semi-supervised steps)."""

    def __init__(self, n: int, batch_size: int, rng: np.random.Generator) -> None:
        self.n = n
        self.batch_size = min(batch_size, n)
        self.rng = rng
        self._queue: list[np.ndarray] = []

    def next(self) -> np.ndarray:
        if not self._queue:
            self._queue = batches(self.n, self.batch_size, self.rng)
        return self._queue.pop(0)
