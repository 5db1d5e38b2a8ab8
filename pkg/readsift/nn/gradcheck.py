"""Central finite-difference check of tape gradients."""

from collections.abc import Callable, Mapping
from dataclasses import dataclass

import numpy as np

from readsift.nn.tensor import Tape, Tensor


@dataclass(frozen=True)
class GradientCheck:
    max_relative_error: float
    samples: int
    worst: str

    def passed(self, tolerance: float = 1e-4) -> bool:
        return self.max_relative_error < tolerance


def relative_error(analytic: float, numeric: float, floor: float = 1e-3) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), floor)


def gradient_check(
    loss_fn: Callable[[], Tensor],
    params: Mapping[str, Tensor],
    samples: int = 20,
    step: float = 1e-5,
    seed: int = 0,
) -> GradientCheck:
    """
    Compare tape gradients of ``loss_fn()`` with central differences.

    ``loss_fn`` must be deterministic (draw any noise from a generator it
    re-seeds on every call). Up to ``samples`` random entries of every
    parameter are perturbed by ``+-step``.
    """
    for tensor in params.values():
        tensor.zero_grad()
    with Tape() as tape:
        loss = loss_fn()
    tape.backward(loss)
    analytic = {name: t.grad.copy() if t.grad is not None else np.zeros_like(t.data) for name, t in params.items()}

    rng = np.random.default_rng(seed)
    worst_error, worst_name, total = 0.0, "", 0
    for name, tensor in params.items():
        picks = rng.choice(tensor.size, size=min(samples, tensor.size), replace=False)
        for index in picks:
            position = np.unravel_index(int(index), tensor.shape)
            original = tensor.data[position]
            tensor.data[position] = original + step
            upper = loss_fn().item()
            tensor.data[position] = original - step
            lower = loss_fn().item()
            tensor.data[position] = original

            numeric = (upper - lower) / (2.0 * step)
            error = relative_error(float(analytic[name].reshape(-1)[index]), numeric)
            total += 1
            if error > worst_error:
                worst_error, worst_name = error, f"{name}[{int(index)}]"
    return GradientCheck(worst_error, total, worst_name)
