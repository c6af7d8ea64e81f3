"""Key-value settings files (``key = value`` per line, ``#`` comments)."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from trsat.exceptions import ConfigurationError

if TYPE_CHECKING:
    from pathlib import Path

logger = logging.getLogger(__name__)


def parse_settings(text: str, source: str = "<string>") -> dict[str, str]:
    """Parse settings text into a dictionary of raw string values.

    Args:
        text: Settings text
        source: Name used in error messages

    Returns:
        Mapping of key to value, in file order

    Raises:
        ConfigurationError: If a line is not ``key = value`` or a key repeats
    """
    settings: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        if key in settings:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key {key!r}")
        settings[key] = value.strip()
    logger.debug(f"Parsed {len(settings)} settings from {source}")
    return settings


def read_settings(path: Path) -> dict[str, str]:
    """Read a settings file.

    Args:
        path: Settings file path

    Returns:
        Mapping of key to raw value

    Raises:
        ConfigurationError: If the file cannot be read or parsed
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read settings file {path}: {e}") from e
    return parse_settings(text, source=str(path))
