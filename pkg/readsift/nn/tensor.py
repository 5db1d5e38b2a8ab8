"""
Tensors and the gradient tape.

A ``Tensor`` wraps a float64 numpy array and an optional gradient. Operations
in ``readsift.nn.functional`` record a backward closure on the active
``Tape`` whenever one of their inputs requires a gradient; outside a tape
block nothing is recorded and forward passes are pure.

    with Tape() as tape:
        loss = model.loss(batch)
    tape.backward(loss)
"""

from collections.abc import Callable, Sequence
from contextvars import ContextVar
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from readsift.core.errors import ShapeError

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_ACTIVE_TAPE: ContextVar[Optional["Tape"]] = ContextVar("readsift_active_tape", default=None)


class Tensor:
    """Double-precision n-dimensional array with an optional gradient slot."""

    __slots__ = ("data", "grad", "requires_grad", "name")

    __array_priority__ = 100.0

    def __init__(self, data: Any, requires_grad: bool = False, name: str = "") -> None:
        self.data: np.ndarray = np.asarray(data, dtype=np.float64)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def size(self) -> int:
        return int(self.data.size)

    def item(self) -> float:
        return float(self.data.item())

    def numpy(self) -> np.ndarray:
        return self.data

    def zero_grad(self) -> None:
        self.grad = np.zeros_like(self.data)

    def accumulate(self, grad: np.ndarray) -> None:
        if grad.shape != self.data.shape:
            raise ShapeError(f"gradient for '{self.name or 'tensor'}'", self.data.shape, grad.shape)
        self.grad = grad.copy() if self.grad is None else self.grad + grad

    def __repr__(self) -> str:
        label = f" '{self.name}'" if self.name else ""
        return f"Tensor{label}(shape={self.shape}, requires_grad={self.requires_grad})"

    # Operator sugar; implementations live in functional to keep one code path.

    def __add__(self, other: Any) -> "Tensor":
        from readsift.nn import functional as F

        return F.add(self, other)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Tensor":
        from readsift.nn import functional as F

        return F.sub(self, other)

    def __rsub__(self, other: Any) -> "Tensor":
        from readsift.nn import functional as F

        return F.sub(other, self)

    def __mul__(self, other: Any) -> "Tensor":
        from readsift.nn import functional as F

        return F.mul(self, other)

    __rmul__ = __mul__

    def __neg__(self) -> "Tensor":
        from readsift.nn import functional as F

        return F.mul(self, -1.0)

    def __truediv__(self, other: float) -> "Tensor":
        from readsift.nn import functional as F

        return F.mul(self, 1.0 / float(other))


def as_tensor(value: Any) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


@dataclass
class _Node:
    out: Tensor
    parents: tuple[Tensor, ...]
    backward_fn: BackwardFn


class Tape:
    """Ordered record of differentiable operations executed inside its block."""

    def __init__(self) -> None:
        self._nodes: list[_Node] = []
        self._token: Any = None

    def __enter__(self) -> "Tape":
        self._token = _ACTIVE_TAPE.set(self)
        return self

    def __exit__(self, *exc: object) -> None:
        _ACTIVE_TAPE.reset(self._token)
        self._token = None

    def __len__(self) -> int:
        return len(self._nodes)

    def record(self, out: Tensor, parents: tuple[Tensor, ...], backward_fn: BackwardFn) -> None:
        self._nodes.append(_Node(out, parents, backward_fn))

    def backward(self, loss: Tensor) -> None:
        """
        Propagate d(loss)/d(.) to every recorded tensor, newest operation first.

        Gradients are added to whatever the tensors already hold; call
        ``zero_grad`` on the parameters between steps.
        """
        if loss.size != 1:
            raise ShapeError("backward needs a scalar loss", (), loss.shape)
        loss.accumulate(np.ones_like(loss.data))

        for node in reversed(self._nodes):
            grad = node.out.grad
            if grad is None:
                continue
            for parent, parent_grad in zip(node.parents, node.backward_fn(grad), strict=True):
                if parent_grad is not None and parent.requires_grad:
                    parent.accumulate(parent_grad)


def active_tape() -> Optional[Tape]:
    return _ACTIVE_TAPE.get()


def result(data: np.ndarray, parents: tuple[Tensor, ...], backward_fn: BackwardFn) -> Tensor:
    """Wrap an op's output, recording it when a tape is active and a parent needs a gradient."""
    tape = _ACTIVE_TAPE.get()
    tracked = tape is not None and any(p.requires_grad for p in parents)
    out = Tensor(data, requires_grad=tracked)
    if tracked:
        assert tape is not None
        tape.record(out, parents, backward_fn)
    return out
