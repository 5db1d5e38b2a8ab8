"""
Base Trainer Interface for readsift.

Every training procedure (supervised baseline, VAEs, semi-supervised GAN)
implements the same ``fit`` contract so the CLI and the benchmark can drive
them interchangeably.
"""

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, ClassVar, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from readsift.core.errors import CheckpointFormatError, NumericError, ShapeError
from readsift.evaluation.metrics import macro_f_score_indices
from readsift.genomics.signals import format_real
from readsift.models.base import ModelConfig, Network
from readsift.models.store import restore_optimizer, to_checkpoint
from readsift.nn.checkpoint import Checkpoint
from readsift.nn.optim import Adam, AdamConfig
from readsift.training.data import LabeledSet, UnlabeledSet

logger = logging.getLogger(__name__)

DEFAULT_EPOCHS = {"ff": 100, "m1": 200, "m2": 200, "m1m2": 200, "semigan": 300}


class TrainConfig(BaseModel):
    """Optimization schedule of one training run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    batch_size: int = Field(64, ge=2)
    epochs: int = Field(100, ge=0)
    lr: float = Field(1e-3, gt=0.0)
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    seed: int = 0
    val_fraction: float = Field(0.2, ge=0.0, lt=1.0)
    alpha_scale: float = Field(0.1, ge=0.0, description="M2 classification weight per unit of data ratio")
    m1_epochs: Optional[int] = Field(None, ge=0, description="M1 stage of m1m2 (defaults to epochs)")

    @classmethod
    def for_kind(cls, kind: str, **overrides: Any) -> "TrainConfig":
        """Defaults of one model kind, with ``overrides`` applied on top."""
        defaults: dict[str, Any] = {"epochs": DEFAULT_EPOCHS.get(kind, 100)}
        if kind == "semigan":
            defaults.update(lr=2e-4, beta1=0.5)
        return cls(**{**defaults, **overrides})

    def adam(self) -> AdamConfig:
        return AdamConfig(lr=self.lr, beta1=self.beta1)


@dataclass
class EpochRecord:
    epoch: int
    losses: dict[str, float]
    val_macro_f: Optional[float] = None


@dataclass
class TrainingLog:
    """Per-epoch loss components; written as TSV."""

    records: list[EpochRecord] = field(default_factory=list)

    def add(self, record: EpochRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def columns(self) -> list[str]:
        names: list[str] = []
        for record in self.records:
            names.extend(name for name in record.losses if name not in names)
        return names

    def series(self, name: str) -> list[float]:
        return [r.losses[name] for r in self.records if name in r.losses]

    def to_tsv(self) -> str:
        columns = self.columns()
        lines = ["\t".join(["epoch", *columns, "val_macro_f"])]
        for r in self.records:
            cells = [format_real(r.losses[c]) if c in r.losses else "NA" for c in columns]
            val = format_real(r.val_macro_f) if r.val_macro_f is not None else "NA"
            lines.append("\t".join([str(r.epoch), *cells, val]))
        return "\n".join(lines) + "\n"

    def save(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.to_tsv())


@dataclass
class TrainResult:
    model: Network
    log: TrainingLog
    checkpoint: Checkpoint
    best_epoch: Optional[int] = None


EpochCallback = Callable[[EpochRecord], None]


class BaseTrainer(ABC):
    """
    Abstract base class for all trainers.

    Subclasses implement ``fit``; the base class provides seeding, the
    divergence guard, validation tracking and checkpoint assembly.
    """

    kind: ClassVar[str]

    def __init__(
        self,
        config: Optional[TrainConfig] = None,
        model_config: Optional[ModelConfig] = None,
        on_epoch: Optional[EpochCallback] = None,
        resume: Optional[Checkpoint] = None,
    ) -> None:
        """
        Initialize the trainer.

        Args:
            config: Optimization schedule (kind defaults when omitted)
            model_config: Network sizes; the init seed is taken from ``config.seed``
            on_epoch: Called after every epoch with its record
            resume: Checkpoint of the same kind to continue from; its weights and
                optimizer moments replace the fresh ones, then ``config.epochs`` more
                epochs run

        Raises:
            CheckpointFormatError: If ``resume`` holds another model kind
        """
        if resume is not None and resume.kind != self.kind:
            raise CheckpointFormatError(f"cannot resume {self.kind} training from a '{resume.kind}' checkpoint")
        self.config = config or TrainConfig.for_kind(self.kind)
        if model_config is None:
            stored = resume.header.get("model") if resume is not None else None
            model_config = ModelConfig(**stored) if stored else ModelConfig.for_kind(self.kind)
        self.model_config = model_config.model_copy(update={"seed": self.config.seed})
        self.on_epoch = on_epoch
        self.resume = resume
        self._resume_weights = True
        self._resume_labels: dict[str, str] = {}
        self.rng = np.random.default_rng([self.config.seed, 1])
        self.log = TrainingLog()
        self.optimizers: dict[str, Adam] = {}
        self._best: Optional[tuple[float, int, dict[str, np.ndarray], dict[str, np.ndarray]]] = None

    @abstractmethod
    def fit(self, labeled: LabeledSet, unlabeled: Optional[UnlabeledSet] = None) -> TrainResult:
        """
        Train a model.

        Args:
            labeled: Labeled training examples (validation is split off here)
            unlabeled: Unlabeled pool, used by the semi-supervised kinds

        Returns:
            TrainResult with the model, its per-epoch log and a checkpoint
        """

    def _adam(self, params: dict[str, Any]) -> Adam:
        return Adam(params, self.config.adam())

    def _resume(self, model: Network, optimizers: dict[str, Adam]) -> None:
        """Load the resume checkpoint into ``model`` and ``optimizers``; no-op without one."""
        if self.resume is None:
            return
        if self._resume_weights:
            try:
                model.params.load(self.resume.params, self.resume.buffers)
            except ShapeError as e:
                raise CheckpointFormatError(f"checkpoint does not fit the {self.kind} network: {e}") from None
        for label, optimizer in optimizers.items():
            restore_optimizer(self.resume, self._resume_labels.get(label, label), optimizer)
        logger.info("Resuming %s from checkpoint (optimizer steps %s)", self.kind, self.resume.header.get("optimizer_steps"))

    def _guard(self, epoch: int, **losses: float) -> None:
        for name, value in losses.items():
            if not math.isfinite(value):
                raise NumericError(f"{self.kind} training diverged: loss '{name}' is {value} at epoch {epoch}")

    def _finish_epoch(self, model: Network, record: EpochRecord) -> None:
        self.log.add(record)
        logger.debug(
            "%s epoch %d: %s val_macro_f=%s",
            self.kind,
            record.epoch,
            " ".join(f"{k}={v:.6g}" for k, v in record.losses.items()),
            "NA" if record.val_macro_f is None else f"{record.val_macro_f:.4f}",
        )
        if record.val_macro_f is not None and (self._best is None or record.val_macro_f > self._best[0]):
            self._best = (
                record.val_macro_f,
                record.epoch,
                model.params.values(),
                {n: b.copy() for n, b in model.params.buffers().items()},
            )
        if self.on_epoch:
            self.on_epoch(record)

    @staticmethod
    def _validate(predict: Callable[[np.ndarray], np.ndarray], val: Optional[LabeledSet]) -> Optional[float]:
        if val is None or len(val) == 0:
            return None
        return macro_f_score_indices(np.argmax(predict(val.x), axis=1), val.y, warn=False)

    def _restore_best(self, model: Network) -> Optional[int]:
        """Load the best-validated weights, if any epoch was validated."""
        if self._best is None:
            return None
        _, epoch, values, buffers = self._best
        model.params.load(values, buffers)
        logger.info("Selected %s weights from epoch %d (val macro-F %.4f)", self.kind, epoch, self._best[0])
        return epoch

    def _result(
        self, model: Network, optimizers: dict[str, Adam], best_epoch: Optional[int]
    ) -> TrainResult:
        self.optimizers = optimizers
        header = {"train": self.config.model_dump(), "best_epoch": best_epoch}
        return TrainResult(model, self.log, to_checkpoint(model, header, optimizers), best_epoch)
