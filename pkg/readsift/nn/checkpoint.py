"""
Binary checkpoint codec.

Layout (all integers little-endian)::

    b"RSFT1"
    uint32 header_length, header: UTF-8 JSON with sorted keys
        {"kind": ..., "model": {...}, "train": {...}, "optimizer_steps": {...}, ...}
    three sections, in order: parameters, buffers, optimizer moments
        uint32 record_count, then records sorted by name:
            uint16 name_length, name (UTF-8)
            uint8 ndim, ndim x uint32 dims
            prod(dims) x float64

Nothing time- or host-dependent is written, so equal state gives equal bytes.
"""

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from readsift.core.errors import CheckpointFormatError

MAGIC = b"RSFT1"


@dataclass
class Checkpoint:
    """Everything needed to rebuild and resume a trained model."""

    kind: str
    header: dict[str, Any] = field(default_factory=dict)
    params: dict[str, np.ndarray] = field(default_factory=dict)
    buffers: dict[str, np.ndarray] = field(default_factory=dict)
    optimizer: dict[str, np.ndarray] = field(default_factory=dict)


def _encode_section(arrays: dict[str, np.ndarray]) -> bytes:
    chunks = [struct.pack("<I", len(arrays))]
    for name in sorted(arrays):
        array = np.ascontiguousarray(arrays[name], dtype="<f8")
        raw_name = name.encode("utf-8")
        chunks.append(struct.pack("<H", len(raw_name)) + raw_name)
        chunks.append(struct.pack(f"<B{array.ndim}I", array.ndim, *array.shape))
        chunks.append(array.tobytes())
    return b"".join(chunks)


def encode(ckpt: Checkpoint) -> bytes:
    header = json.dumps({**ckpt.header, "kind": ckpt.kind}, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return b"".join(
        [
            MAGIC,
            struct.pack("<I", len(header)),
            header,
            _encode_section(ckpt.params),
            _encode_section(ckpt.buffers),
            _encode_section(ckpt.optimizer),
        ]
    )


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.offset = 0

    def take(self, n: int) -> bytes:
        if self.offset + n > len(self.data):
            raise CheckpointFormatError(f"checkpoint truncated at byte {self.offset} (needed {n} more)")
        chunk = self.data[self.offset : self.offset + n]
        self.offset += n
        return chunk

    def unpack(self, fmt: str) -> tuple[Any, ...]:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def _decode_section(reader: _Reader) -> dict[str, np.ndarray]:
    (count,) = reader.unpack("<I")
    arrays: dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_length,) = reader.unpack("<H")
        try:
            name = reader.take(name_length).decode("utf-8")
        except UnicodeDecodeError:
            raise CheckpointFormatError("checkpoint record name is not UTF-8") from None
        (ndim,) = reader.unpack("<B")
        shape = reader.unpack(f"<{ndim}I")
        size = int(np.prod(shape)) if ndim else 1
        arrays[name] = np.frombuffer(reader.take(8 * size), dtype="<f8").astype(np.float64).reshape(shape)
    return arrays


def decode(data: bytes) -> Checkpoint:
    """
    Raises:
        CheckpointFormatError: On a wrong magic, truncation, or a malformed header
    """
    reader = _Reader(data)
    if reader.take(len(MAGIC)) != MAGIC:
        raise CheckpointFormatError("not a readsift checkpoint (bad magic)")
    (header_length,) = reader.unpack("<I")
    try:
        header = json.loads(reader.take(header_length).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointFormatError(f"checkpoint header is not valid JSON: {e}") from None
    if not isinstance(header, dict) or "kind" not in header:
        raise CheckpointFormatError("checkpoint header lacks a model kind")

    kind = header.pop("kind")
    params = _decode_section(reader)
    buffers = _decode_section(reader)
    optimizer = _decode_section(reader)
    if reader.offset != len(data):
        raise CheckpointFormatError(f"{len(data) - reader.offset} trailing bytes after checkpoint")
    return Checkpoint(kind, header, params, buffers, optimizer)


def save(ckpt: Checkpoint, path: Path) -> None:
    Path(path).write_bytes(encode(ckpt))


def load(path: Path) -> Checkpoint:
    return decode(Path(path).read_bytes())
