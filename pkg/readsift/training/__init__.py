"""
Training procedures for every model kind.
"""

from typing import Optional

from readsift.models.base import ModelConfig
from readsift.nn.checkpoint import Checkpoint
from readsift.training.base import (
    BaseTrainer,
    EpochCallback,
    EpochRecord,
    TrainConfig,
    TrainingLog,
    TrainResult,
)
from readsift.training.data import LabeledSet, UnlabeledSet
from readsift.training.ff import FFTrainer
from readsift.training.m1 import M1Trainer, extract_z1
from readsift.training.m2 import M1M2Trainer, M2Trainer
from readsift.training.semigan import SemiGANTrainer

__all__ = [
    "BaseTrainer",
    "TrainConfig",
    "TrainResult",
    "TrainingLog",
    "EpochRecord",
    "LabeledSet",
    "UnlabeledSet",
    "FFTrainer",
    "M1Trainer",
    "M2Trainer",
    "M1M2Trainer",
    "SemiGANTrainer",
    "TrainerFactory",
    "extract_z1",
]


class TrainerFactory:
    """
    Factory class to instantiate trainers based on the model kind.
    """

    _TRAINERS: dict[str, type[BaseTrainer]] = {
        "ff": FFTrainer,
        "m1": M1Trainer,
        "m2": M2Trainer,
        "m1m2": M1M2Trainer,
        "semigan": SemiGANTrainer,
    }

    @classmethod
    def create(
        cls,
        kind: str,
        config: Optional[TrainConfig] = None,
        model_config: Optional[ModelConfig] = None,
        on_epoch: Optional[EpochCallback] = None,
        resume: Optional[Checkpoint] = None,
    ) -> BaseTrainer:
        """
        Create a trainer instance.

        Args:
            kind: One of 'ff', 'm1', 'm2', 'm1m2', 'semigan'
            config: Training schedule (defaults of the kind when omitted)
            model_config: Network sizes
            on_epoch: Per-epoch progress callback
            resume: Checkpoint of the same kind to continue training from

        Returns:
            An instance of BaseTrainer

        Raises:
            ValueError: If the kind is unknown
        """
        trainer_class = cls._TRAINERS.get(kind.lower())
        if not trainer_class:
            valid = ", ".join(cls._TRAINERS.keys())
            raise ValueError(f"Unknown model kind '{kind}'. Valid options: {valid}")

        return trainer_class(config or TrainConfig.for_kind(kind.lower()), model_config, on_epoch, resume)
