"""Runtime configuration, settings files and the external solver runner."""

from __future__ import annotations

from trsat.core import config
from trsat.core.config import (
    set_external_solver_path,
    set_oracle_cap,
    set_timeout,
    set_verbose,
)
from trsat.core.executor import ExternalResult, ExternalSolver, parse_solver_output
from trsat.core.settings import parse_settings, read_settings

__all__ = [
    "ExternalResult",
    "ExternalSolver",
    "config",
    "parse_settings",
    "parse_solver_output",
    "read_settings",
    "set_external_solver_path",
    "set_oracle_cap",
    "set_timeout",
    "set_verbose",
]
