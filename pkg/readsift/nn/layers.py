"""
Layer objects composed into networks.

Layers register their weights in a shared ``ParameterSet`` under a dotted
name, so a whole model is one flat set of named tensors. Each layer also
maps a per-example input shape to its output shape, which lets
``Sequential.check`` verify the wiring of a model before any data flows.
"""

from abc import ABC, abstractmethod
from collections.abc import Sequence

import numpy as np

from readsift.core.errors import ShapeError
from readsift.nn import functional as F
from readsift.nn.parameters import ParameterSet
from readsift.nn.tensor import Tensor

Shape = tuple[int, ...]


def he_normal(rng: np.random.Generator, shape: Shape, fan_in: int) -> np.ndarray:
    return rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)


class Layer(ABC):
    """One step of a network."""

    def __call__(self, x: Tensor, training: bool = False) -> Tensor:
        return self.forward(x, training)

    @abstractmethod
    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        """Apply the layer to a batch."""

    @abstractmethod
    def output_shape(self, shape: Shape) -> Shape:
        """Per-example output shape, or ShapeError if ``shape`` cannot be consumed."""


class Dense(Layer):
    def __init__(self, params: ParameterSet, name: str, n_in: int, n_out: int, rng: np.random.Generator) -> None:
        self.n_in, self.n_out = n_in, n_out
        self.weight = params.add(f"{name}.weight", he_normal(rng, (n_out, n_in), n_in))
        self.bias = params.add(f"{name}.bias", np.zeros(n_out))

    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.dense(x, self.weight, self.bias)

    def output_shape(self, shape: Shape) -> Shape:
        if shape != (self.n_in,):
            raise ShapeError(f"dense {self.weight.name}", (self.n_in,), shape)
        return (self.n_out,)


class Conv1d(Layer):
    def __init__(
        self, params: ParameterSet, name: str, c_in: int, c_out: int, kernel: int, rng: np.random.Generator
    ) -> None:
        if kernel % 2 == 0:
            raise ShapeError(f"convolution {name} needs an odd kernel, got {kernel}")
        self.c_in, self.c_out = c_in, c_out
        self.weight = params.add(f"{name}.weight", he_normal(rng, (c_out, c_in, kernel), c_in * kernel))
        self.bias = params.add(f"{name}.bias", np.zeros(c_out))

    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.conv1d(x, self.weight, self.bias)

    def output_shape(self, shape: Shape) -> Shape:
        if len(shape) != 2 or shape[0] != self.c_in:
            raise ShapeError(f"convolution {self.weight.name}", (self.c_in, None), shape)
        return (self.c_out, shape[1])


class ConvTranspose1d(Layer):
    def __init__(
        self, params: ParameterSet, name: str, c_in: int, c_out: int, kernel: int, rng: np.random.Generator
    ) -> None:
        if kernel % 2 == 0:
            raise ShapeError(f"transpose convolution {name} needs an odd kernel, got {kernel}")
        self.c_in, self.c_out = c_in, c_out
        self.weight = params.add(f"{name}.weight", he_normal(rng, (c_in, c_out, kernel), c_in * kernel))
        self.bias = params.add(f"{name}.bias", np.zeros(c_out))

    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.conv_transpose1d(x, self.weight, self.bias)

    def output_shape(self, shape: Shape) -> Shape:
        if len(shape) != 2 or shape[0] != self.c_in:
            raise ShapeError(f"transpose convolution {self.weight.name}", (self.c_in, None), shape)
        return (self.c_out, shape[1])


class BatchNorm(Layer):
    """Batch normalization over channels (``[C, L]`` inputs) or features (``[F]`` inputs)."""

    def __init__(self, params: ParameterSet, name: str, channels: int, momentum: float = 0.9) -> None:
        self.channels = channels
        self.momentum = momentum
        self.gamma = params.add(f"{name}.gamma", np.ones(channels))
        self.beta = params.add(f"{name}.beta", np.zeros(channels))
        self.running_mean = params.add_buffer(f"{name}.running_mean", np.zeros(channels))
        self.running_var = params.add_buffer(f"{name}.running_var", np.ones(channels))

    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.batch_norm(
            x, self.gamma, self.beta, self.running_mean, self.running_var, training, momentum=self.momentum
        )

    def output_shape(self, shape: Shape) -> Shape:
        if not shape or shape[0] != self.channels:
            raise ShapeError(f"batch norm {self.gamma.name}", (self.channels,), shape)
        return shape


class MaxPool(Layer):
    """Window-2 max pooling; the indices are discarded."""

    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.max_pool(x)[0]

    def output_shape(self, shape: Shape) -> Shape:
        if len(shape) != 2 or shape[1] < 2:
            raise ShapeError("max pool", (None, ">=2"), shape)
        return (shape[0], shape[1] // 2)


class Upsample(Layer):
    """Nearest-neighbor duplication, used where no pooling indices exist."""

    def __init__(self, factor: int = 2) -> None:
        self.factor = factor

    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.upsample_nearest(x, self.factor)

    def output_shape(self, shape: Shape) -> Shape:
        return (*shape[:-1], shape[-1] * self.factor)


class Flatten(Layer):
    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.flatten(x)

    def output_shape(self, shape: Shape) -> Shape:
        return (int(np.prod(shape)),)


class Reshape(Layer):
    def __init__(self, shape: Shape) -> None:
        self.shape = shape

    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.reshape(x, (x.shape[0], *self.shape))

    def output_shape(self, shape: Shape) -> Shape:
        if int(np.prod(shape)) != int(np.prod(self.shape)):
            raise ShapeError("reshape", self.shape, shape)
        return self.shape


class ReLU(Layer):
    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.relu(x)

    def output_shape(self, shape: Shape) -> Shape:
        return shape


class LeakyReLU(Layer):
    def __init__(self, slope: float = 0.2) -> None:
        self.slope = slope

    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.leaky_relu(x, self.slope)

    def output_shape(self, shape: Shape) -> Shape:
        return shape


class Sigmoid(Layer):
    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        return F.sigmoid(x)

    def output_shape(self, shape: Shape) -> Shape:
        return shape


class Sequential(Layer):
    """Layers applied in order."""

    def __init__(self, layers: Sequence[Layer]) -> None:
        self.layers = list(layers)

    def forward(self, x: Tensor, training: bool = False) -> Tensor:
        for layer in self.layers:
            x = layer(x, training)
        return x

    def output_shape(self, shape: Shape) -> Shape:
        for layer in self.layers:
            shape = layer.output_shape(shape)
        return shape

    def check(self, input_shape: Shape, expected: Shape) -> None:
        """Raise ShapeError unless ``input_shape`` flows through to ``expected``."""
        got = self.output_shape(input_shape)
        if got != expected:
            raise ShapeError("network output", expected, got)
