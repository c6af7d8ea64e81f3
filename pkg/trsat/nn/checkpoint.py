"""Versioned binary checkpoints.

Layout (all integers little-endian ``u32``)::

    b"TRSAT" | version | len(config) | config (JSON, UTF-8) | parameter count
    per parameter: len(name) | name (UTF-8) | rows | cols | rows*cols float64 ('<f8')

One-dimensional parameters are stored with ``rows = 1``.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import struct
from typing import TYPE_CHECKING, Final

import numpy as np
import torch

from trsat.exceptions import CheckpointError, CheckpointFormatError, CheckpointVersionError, TrsatError
from trsat.nn.autodiff import DTYPE
from trsat.nn.model import ModelConfig, TrsatModel

if TYPE_CHECKING:
    from pathlib import Path

logger = logging.getLogger(__name__)

MAGIC: Final = b"TRSAT"
FORMAT_VERSION: Final = 1
_U32 = struct.Struct("<I")


def dump_checkpoint(model: TrsatModel) -> bytes:
    """Serialise configuration and every parameter."""
    config_blob = json.dumps(dataclasses.asdict(model.config), sort_keys=True).encode("utf-8")
    params = list(model.named_parameters())
    chunks = [MAGIC, _U32.pack(FORMAT_VERSION), _U32.pack(len(config_blob)), config_blob]
    chunks.append(_U32.pack(len(params)))
    for name, p in params:
        data = p.detach().cpu().numpy().astype("<f8")
        rows, cols = (1, data.shape[0]) if data.ndim == 1 else data.shape
        encoded = name.encode("utf-8")
        chunks.extend(
            [_U32.pack(len(encoded)), encoded, _U32.pack(rows), _U32.pack(cols), data.tobytes()]
        )
    return b"".join(chunks)


class _Reader:
    def __init__(self, blob: bytes) -> None:
        self.blob = blob
        self.offset = 0

    def take(self, size: int, what: str) -> bytes:
        end = self.offset + size
        if end > len(self.blob):
            raise CheckpointFormatError(f"Truncated checkpoint while reading {what}")
        chunk = self.blob[self.offset : end]
        self.offset = end
        return chunk

    def u32(self, what: str) -> int:
        return int(_U32.unpack(self.take(_U32.size, what))[0])


def parse_checkpoint(blob: bytes) -> TrsatModel:
    """Rebuild a model from checkpoint bytes; the stored config wins.

    Raises:
        CheckpointFormatError: Bad magic, truncation, unknown or misshapen parameters
        CheckpointVersionError: Unsupported format version
    """
    reader = _Reader(blob)
    if reader.take(len(MAGIC), "magic") != MAGIC:
        raise CheckpointFormatError("Not a trsat checkpoint (bad magic bytes)")
    version = reader.u32("version")
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(version, FORMAT_VERSION)

    config_blob = reader.take(reader.u32("config length"), "config")
    try:
        cfg = ModelConfig(**json.loads(config_blob.decode("utf-8")))
    except (ValueError, TypeError, TrsatError) as e:
        raise CheckpointFormatError(f"Unreadable model config: {e}") from e

    model = TrsatModel(cfg)
    expected = dict(model.named_parameters())
    count = reader.u32("parameter count")
    if count != len(expected):
        raise CheckpointFormatError(f"Checkpoint holds {count} parameters, model has {len(expected)}")

    with torch.no_grad():
        for _ in range(count):
            name = reader.take(reader.u32("name length"), "name").decode("utf-8")
            rows, cols = reader.u32("rows"), reader.u32("cols")
            values = np.frombuffer(reader.take(rows * cols * 8, name), dtype="<f8")
            if name not in expected:
                raise CheckpointFormatError(f"Unknown parameter {name!r}")
            target = expected.pop(name)
            if rows * cols != target.numel() or (target.dim() == 2 and (rows, cols) != tuple(target.shape)):
                raise CheckpointFormatError(
                    f"Parameter {name!r} stored as {rows}x{cols}, model expects {tuple(target.shape)}"
                )
            target.copy_(torch.from_numpy(values.copy()).to(DTYPE).reshape(target.shape))
    if reader.offset != len(blob):
        raise CheckpointFormatError(f"{len(blob) - reader.offset} trailing bytes in checkpoint")
    return model


def save_checkpoint(model: TrsatModel, path: Path) -> None:
    try:
        path.write_bytes(dump_checkpoint(model))
    except OSError as e:
        raise CheckpointError(f"Cannot write checkpoint {path}: {e}") from e
    logger.info(f"Saved checkpoint {path} ({model.num_parameters()} parameters)")


def load_checkpoint(path: Path) -> TrsatModel:
    try:
        blob = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"Cannot read checkpoint {path}: {e}") from e
    model = parse_checkpoint(blob)
    logger.info(f"Loaded checkpoint {path}")
    return model
