"""Run manifests: what a CLI run read, wrote and how long it took."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)

MANIFEST_VERSION = 1


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def _jsonable(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


@dataclass
class RunManifest:
    """Everything needed to reproduce a run; written once, atomically, when it ends."""

    command: str
    config: dict[str, Any] = field(default_factory=dict)
    seeds: dict[str, int] = field(default_factory=dict)
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    checksums: dict[str, str] = field(default_factory=dict)
    version: int = MANIFEST_VERSION

    def add_input(self, path: Path) -> None:
        self.inputs.append(str(path))
        if path.is_file():
            self.checksums[str(path)] = sha256_file(path)

    def add_output(self, path: Path) -> None:
        self.outputs.append(str(path))
        if path.is_file():
            self.checksums[str(path)] = sha256_file(path)

    def to_json(self) -> str:
        return json.dumps(_jsonable(asdict(self)), indent=2, sort_keys=True) + "\n"

    def write(self, path: Path) -> None:
        """Write via a temporary file in the target directory and an atomic rename."""
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(self.to_json())
            os.replace(tmp_name, path)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
        logger.info(f"Wrote run manifest {path}")

    @classmethod
    def read(cls, path: Path) -> RunManifest:
        data = json.loads(path.read_text(encoding="utf-8"))
        return cls(**data)
