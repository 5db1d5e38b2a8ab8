"""
Network architectures for read classification.
"""

from typing import Optional

from readsift.models.base import ModelConfig, Network
from readsift.models.ff import FFClassifier
from readsift.models.m1m2 import M1, M2, StackedM1M2
from readsift.models.semigan import SemiGAN

__all__ = [
    "ModelConfig",
    "Network",
    "FFClassifier",
    "M1",
    "M2",
    "StackedM1M2",
    "SemiGAN",
    "ModelFactory",
]


class ModelFactory:
    """
    Factory class to build networks from their kind name.
    """

    _MODELS: dict[str, type[Network]] = {
        "ff": FFClassifier,
        "m1": M1,
        "m2": M2,
        "m1m2": StackedM1M2,
        "semigan": SemiGAN,
    }

    @classmethod
    def kinds(cls) -> list[str]:
        return list(cls._MODELS)

    @classmethod
    def create(cls, kind: str, cfg: Optional[ModelConfig] = None) -> Network:
        """
        Build a network.

        Args:
            kind: One of 'ff', 'm1', 'm2', 'm1m2', 'semigan'
            cfg: Sizes and initialization seed

        Returns:
            A freshly initialized network

        Raises:
            ValueError: If the kind is unknown
        """
        model_class = cls._MODELS.get(kind.lower())
        if not model_class:
            valid = ", ".join(cls._MODELS.keys())
            raise ValueError(f"Unknown model kind '{kind}'. Valid options: {valid}")

        return model_class(cfg)
