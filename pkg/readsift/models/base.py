"""
Base network interface and shared model configuration.

Every concrete network registers its weights in a ``ParameterSet`` under a
name prefix equal to its kind (``ff.``, ``m1.``, ``m2.``, ``semigan.``), builds
its layers from a seeded generator, and verifies its own wiring before the
constructor returns.
"""

from abc import ABC, abstractmethod
from typing import Any, ClassVar, Optional, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from readsift.core.errors import ShapeError
from readsift.genomics.signals import DEFAULT_LENGTH_CONV, default_length
from readsift.nn import functional as F
from readsift.nn import layers as nn
from readsift.nn.parameters import ParameterSet
from readsift.nn.tensor import Tensor


class ModelConfig(BaseModel):
    """Sizes shared by every architecture."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    length: int = Field(DEFAULT_LENGTH_CONV, ge=4, description="Signal length L")
    n_classes: int = Field(4, ge=2)
    z1_dim: int = Field(10, ge=1)
    z2_dim: int = Field(3, ge=1)
    z_gan_dim: int = Field(100, ge=1)
    seed: int = Field(0, description="Weight initialization seed")

    @model_validator(mode="after")
    def check_length(self) -> Self:
        if self.length % 4 != 0:
            raise ValueError(f"signal length must be divisible by 4 (two 2x poolings), got {self.length}")
        return self

    @classmethod
    def for_kind(cls, kind: str, **overrides: Any) -> "ModelConfig":
        """Sizes of one model kind; semi-GAN defaults to L=100, the convolutional kinds to L=500."""
        return cls(**{"length": default_length(kind), **overrides})

    @property
    def pooled_length(self) -> int:
        return self.length // 4

    @property
    def flat_size(self) -> int:
        return 64 * self.pooled_length


def as_batch(x: Any) -> Tensor:
    """``[B, L]`` signals (array or Tensor) -> ``[B, 1, L]`` Tensor."""
    tensor = x if isinstance(x, Tensor) else Tensor(np.asarray(x, dtype=np.float64))
    if tensor.ndim != 2:
        raise ShapeError("signal batch must be [B, L]", None, tensor.shape)
    return F.reshape(tensor, (tensor.shape[0], 1, tensor.shape[1]))


def conv_trunk(params: ParameterSet, prefix: str, rng: np.random.Generator) -> list[nn.Layer]:
    """conv 5/16 -> pool -> conv 3/32 -> pool -> conv 3/64 -> flatten, relu between."""
    return [
        nn.Conv1d(params, f"{prefix}.conv1", 1, 16, 5, rng),
        nn.ReLU(),
        nn.MaxPool(),
        nn.Conv1d(params, f"{prefix}.conv2", 16, 32, 3, rng),
        nn.ReLU(),
        nn.MaxPool(),
        nn.Conv1d(params, f"{prefix}.conv3", 32, 64, 3, rng),
        nn.ReLU(),
        nn.Flatten(),
    ]


class Network(ABC):
    """
    Abstract base class for all readsift networks.

    Subclasses set ``kind`` and implement ``_build`` (create layers) and
    ``_check`` (assert end-to-end shapes).
    """

    kind: ClassVar[str]

    def __init__(self, cfg: Optional[ModelConfig] = None, params: Optional[ParameterSet] = None) -> None:
        """
        Initialize the network.

        Args:
            cfg: Model sizes and initialization seed
            params: Shared parameter set to register into (a fresh one by default)
        """
        self.cfg = cfg or ModelConfig.for_kind(self.kind)
        self.params = params if params is not None else ParameterSet()
        self._build(np.random.default_rng(self.cfg.seed))
        self._check()

    @abstractmethod
    def _build(self, rng: np.random.Generator) -> None:
        """Create layers, registering weights under ``self.kind``."""

    @abstractmethod
    def _check(self) -> None:
        """Raise ShapeError if the layers do not compose."""

    def count_parameters(self) -> int:
        return sum(t.size for name, t in self.params.items() if name.startswith(f"{self.kind}."))
