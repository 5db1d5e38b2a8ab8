"""
Turn trained checkpoints into per-read classifications.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from readsift.core.errors import CheckpointFormatError, DataError
from readsift.core.labels import CLASSES, ReadClass
from readsift.genomics.signals import Signal, format_real
from readsift.models import M1, M2, ModelConfig, StackedM1M2
from readsift.models.store import from_checkpoint
from readsift.nn.checkpoint import Checkpoint
from readsift.training.data import UnlabeledSet

logger = logging.getLogger(__name__)

SCORE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Classification:
    """Class probabilities of one read; ``label`` is the argmax, lowest index on ties."""

    read_id: str
    scores: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.scores.shape != (len(CLASSES),):
            raise DataError(f"'{self.read_id}': expected {len(CLASSES)} scores, got shape {self.scores.shape}")
        if np.any(self.scores < 0.0) or np.any(self.scores > 1.0):
            raise DataError(f"'{self.read_id}': scores leave [0, 1]")
        if abs(float(self.scores.sum()) - 1.0) > SCORE_TOLERANCE:
            raise DataError(f"'{self.read_id}': scores sum to {self.scores.sum()!r}, not 1")

    @property
    def label(self) -> ReadClass:
        return ReadClass.from_index(int(np.argmax(self.scores)))


def _classifications(ids: Sequence[str], proba: np.ndarray) -> list[Classification]:
    # float64 softmax rows sum to 1 only up to rounding
    proba = proba / proba.sum(axis=1, keepdims=True)
    return [Classification(read_id, row.copy()) for read_id, row in zip(ids, proba, strict=True)]


def classify(model: Any, signals: Sequence[Signal], batch_size: int = 256) -> list[Classification]:
    data = UnlabeledSet.from_signals(signals)
    if len(data) == 0:
        return []
    expected = model.cfg.length
    if data.x.shape[1] != expected:
        raise DataError(f"signals have length {data.x.shape[1]} but the model expects {expected}")
    parts = [model.predict_proba(data.x[i : i + batch_size]) for i in range(0, len(data), batch_size)]
    return _classifications(data.ids, np.concatenate(parts))


def classify_ff(ckpt: Checkpoint, signals: Sequence[Signal]) -> list[Classification]:
    return classify(from_checkpoint(ckpt, "ff"), signals)


def split_stacked(ckpt: Checkpoint) -> tuple[Checkpoint, Checkpoint]:
    """Split a combined ``m1m2`` checkpoint into its ``m1`` and ``m2`` halves."""
    if ckpt.kind != "m1m2":
        raise CheckpointFormatError(f"expected a 'm1m2' checkpoint, got '{ckpt.kind}'")

    def half(kind: str) -> Checkpoint:
        prefix = f"{kind}."
        return Checkpoint(
            kind=kind,
            header=dict(ckpt.header),
            params={n: a for n, a in ckpt.params.items() if n.startswith(prefix)},
            buffers={n: a for n, a in ckpt.buffers.items() if n.startswith(prefix)},
            optimizer={},
        )

    return half("m1"), half("m2")


def classify_m1m2(m1_ckpt: Checkpoint, m2_ckpt: Checkpoint, signals: Sequence[Signal]) -> list[Classification]:
    """Scores ``q(y | z1)`` with ``z1`` the M1 posterior mean of each signal."""
    m1 = from_checkpoint(m1_ckpt, "m1")
    m2 = from_checkpoint(m2_ckpt, "m2")
    assert isinstance(m1, M1) and isinstance(m2, M2)
    if m1.cfg.z1_dim != m2.cfg.z1_dim:
        raise CheckpointFormatError(f"M1 emits {m1.cfg.z1_dim}-dim features but M2 expects {m2.cfg.z1_dim}")

    stacked = StackedM1M2(ModelConfig(**m1_ckpt.header.get("model", {})))
    stacked.params.load({**m1_ckpt.params, **m2_ckpt.params}, {**m1_ckpt.buffers, **m2_ckpt.buffers})
    return classify(stacked, signals)


def classify_semigan(ckpt: Checkpoint, signals: Sequence[Signal]) -> list[Classification]:
    """Discriminator class probabilities with the fake output dropped and the rest renormalized."""
    return classify(from_checkpoint(ckpt, "semigan"), signals)


def classify_checkpoint(ckpt: Checkpoint, signals: Sequence[Signal]) -> list[Classification]:
    """
    Classify with whichever classifier the checkpoint holds.

    Raises:
        CheckpointFormatError: If the checkpoint is not a classifier
    """
    if ckpt.kind == "ff":
        return classify_ff(ckpt, signals)
    if ckpt.kind == "m1m2":
        return classify_m1m2(*split_stacked(ckpt), signals)
    if ckpt.kind == "semigan":
        return classify_semigan(ckpt, signals)
    raise CheckpointFormatError(f"a '{ckpt.kind}' checkpoint cannot classify reads (use ff, m1m2 or semigan)")


def labels_of(classifications: Sequence[Classification]) -> dict[str, ReadClass]:
    return {c.read_id: c.label for c in classifications}


# ============================================================================
# Classification files
# ============================================================================

HEADER = "\t".join(["read_id", "label", *(c.value for c in CLASSES)])


def save_classifications(classifications: Sequence[Classification], path: Path) -> None:
    """Write ``read_id<TAB>label<TAB>score per class`` with a header line."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(HEADER + "\n")
        for c in classifications:
            scores = "\t".join(format_real(s) for s in c.scores.tolist())
            f.write(f"{c.read_id}\t{c.label.value}\t{scores}\n")


def load_classifications(path: Path) -> list[Classification]:
    result: list[Classification] = []
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if line_number == 1 or not line.strip():
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 2 + len(CLASSES):
                raise DataError(f"{path}:{line_number}: expected {2 + len(CLASSES)} columns, got {len(fields)}")
            try:
                scores = np.array([float(v) for v in fields[2:]], dtype=np.float64)
            except ValueError:
                raise DataError(f"{path}:{line_number}: scores must be numbers") from None
            # nine significant digits do not sum back to 1 exactly
            result.append(Classification(fields[0], scores / scores.sum()))
    logger.debug("Loaded %d classifications from %s", len(result), path)
    return result
