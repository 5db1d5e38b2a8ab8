"""Core plumbing for readsift: errors, labels, validation, logging and run configuration."""

from readsift.core.errors import DataError, NumericError, ReadsiftError
from readsift.core.labels import CLASSES, ReadClass

__all__ = [
    "ReadsiftError",
    "DataError",
    "NumericError",
    "ReadClass",
    "CLASSES",
]
