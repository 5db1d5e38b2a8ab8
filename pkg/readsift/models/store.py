"""Convert networks to and from checkpoints."""

from typing import Any, Optional

from readsift.core.errors import CheckpointFormatError, ShapeError
from readsift.models import ModelConfig, ModelFactory, Network
from readsift.nn.checkpoint import Checkpoint
from readsift.nn.optim import Adam


def to_checkpoint(
    model: Network,
    header: Optional[dict[str, Any]] = None,
    optimizers: Optional[dict[str, Adam]] = None,
) -> Checkpoint:
    """
    Snapshot a network, its buffers and (optionally) optimizer moments.

    Optimizer moments are stored as ``m.<param>`` / ``v.<param>`` records;
    step counts go in the header under ``optimizer_steps``.
    """
    moments = {}
    steps = {}
    for label, optimizer in (optimizers or {}).items():
        t, m, v = optimizer.state()
        steps[label] = t
        moments.update({f"m.{name}": array for name, array in m.items()})
        moments.update({f"v.{name}": array for name, array in v.items()})

    return Checkpoint(
        kind=model.kind,
        header={**(header or {}), "model": model.cfg.model_dump(), "optimizer_steps": steps},
        params=model.params.values(),
        buffers={name: array.copy() for name, array in model.params.buffers().items()},
        optimizer=moments,
    )


def from_checkpoint(ckpt: Checkpoint, expected_kind: Optional[str] = None) -> Network:
    """
    Rebuild a network with the stored configuration and weights.

    Raises:
        CheckpointFormatError: If the kind is unknown or unexpected, or the
            stored arrays do not fit the architecture
    """
    if expected_kind is not None and ckpt.kind != expected_kind:
        raise CheckpointFormatError(f"expected a '{expected_kind}' checkpoint, got '{ckpt.kind}'")
    try:
        model = ModelFactory.create(ckpt.kind, ModelConfig(**ckpt.header.get("model", {})))
    except ValueError as e:
        raise CheckpointFormatError(str(e)) from None
    try:
        model.params.load(ckpt.params, ckpt.buffers)
    except ShapeError as e:
        raise CheckpointFormatError(f"checkpoint does not fit a '{ckpt.kind}' network: {e}") from None
    return model


def restore_optimizer(ckpt: Checkpoint, label: str, optimizer: Adam) -> None:
    """Load one optimizer's moments and step count from a checkpoint."""
    names = optimizer.params
    m = {name: ckpt.optimizer[f"m.{name}"] for name in names if f"m.{name}" in ckpt.optimizer}
    v = {name: ckpt.optimizer[f"v.{name}"] for name in names if f"v.{name}" in ckpt.optimizer}
    try:
        optimizer.load_state(int(ckpt.header.get("optimizer_steps", {}).get(label, 0)), m, v)
    except ShapeError as e:
        raise CheckpointFormatError(str(e)) from None
