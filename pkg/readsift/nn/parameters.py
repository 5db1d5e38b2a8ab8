"""Named trainable weights and non-trainable buffers of a network."""

from collections.abc import Iterator, Mapping

import numpy as np

from readsift.core.errors import ShapeError
from readsift.nn.tensor import Tensor


class ParameterSet:
    """
    Ordered map of unique names to trainable tensors, plus named buffers
    (batch-norm running statistics) that travel with them in checkpoints.
    """

    def __init__(self) -> None:
        self._params: dict[str, Tensor] = {}
        self._buffers: dict[str, np.ndarray] = {}

    def add(self, name: str, value: np.ndarray) -> Tensor:
        if name in self._params or name in self._buffers:
            raise ValueError(f"duplicate parameter name '{name}'")
        tensor = Tensor(np.array(value, dtype=np.float64), requires_grad=True, name=name)
        self._params[name] = tensor
        return tensor

    def add_buffer(self, name: str, value: np.ndarray) -> np.ndarray:
        if name in self._params or name in self._buffers:
            raise ValueError(f"duplicate buffer name '{name}'")
        buffer = np.array(value, dtype=np.float64)
        self._buffers[name] = buffer
        return buffer

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def __contains__(self, name: object) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[str]:
        return iter(self._params)

    def __len__(self) -> int:
        return len(self._params)

    def items(self) -> Iterator[tuple[str, Tensor]]:
        return iter(self._params.items())

    def buffers(self) -> dict[str, np.ndarray]:
        return self._buffers

    def select(self, prefix: str) -> dict[str, Tensor]:
        """Parameters whose name starts with ``prefix``."""
        return {name: t for name, t in self._params.items() if name.startswith(prefix)}

    def zero_grad(self) -> None:
        for tensor in self._params.values():
            tensor.zero_grad()

    def count(self) -> int:
        """Number of trainable scalars."""
        return int(sum(t.size for t in self._params.values()))

    def values(self) -> dict[str, np.ndarray]:
        """Copy of every parameter value, keyed by name."""
        return {name: t.data.copy() for name, t in self._params.items()}

    def load(self, values: Mapping[str, np.ndarray], buffers: Mapping[str, np.ndarray] | None = None) -> None:
        """
        Overwrite parameters (and buffers) in place from a name -> array map.

        Raises:
            ShapeError: If a name is missing or extra, or a shape differs
        """
        self._load_into({n: t.data for n, t in self._params.items()}, values, "parameter")
        if buffers is not None:
            self._load_into(self._buffers, buffers, "buffer")

    @staticmethod
    def _load_into(target: dict[str, np.ndarray], source: Mapping[str, np.ndarray], kind: str) -> None:
        if set(target) != set(source):
            missing = sorted(set(target) - set(source))
            extra = sorted(set(source) - set(target))
            raise ShapeError(f"{kind} names differ (missing {missing}, unexpected {extra})")
        for name, array in target.items():
            value = np.asarray(source[name], dtype=np.float64)
            if value.shape != array.shape:
                raise ShapeError(f"{kind} '{name}'", array.shape, value.shape)
            array[...] = value
