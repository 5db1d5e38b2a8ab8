"""
Minimal reverse-mode differentiation engine on numpy.

Double precision throughout. Forward passes outside a ``Tape`` block record
nothing and are safe to run concurrently on frozen parameters.
"""

from readsift.nn.checkpoint import Checkpoint
from readsift.nn.gradcheck import GradientCheck, gradient_check
from readsift.nn.optim import Adam, AdamConfig
from readsift.nn.parameters import ParameterSet
from readsift.nn.tensor import Tape, Tensor

__all__ = [
    "Tensor",
    "Tape",
    "ParameterSet",
    "Adam",
    "AdamConfig",
    "Checkpoint",
    "GradientCheck",
    "gradient_check",
]
