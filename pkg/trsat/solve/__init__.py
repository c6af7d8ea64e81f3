"""Inference-time solving and the WalkSAT baseline."""

from __future__ import annotations

from trsat.solve.solver import (
    DEFAULT_MAX_ITERS,
    IterationTrace,
    MaxSatFn,
    SatResult,
    SatStatus,
    format_report,
    solve_exact,
    solve_max_sat,
    verify_result,
)
from trsat.solve.walksat import WalkSatConfig, WalkSatResult, walksat

__all__ = [
    "DEFAULT_MAX_ITERS",
    "IterationTrace",
    "MaxSatFn",
    "SatResult",
    "SatStatus",
    "WalkSatConfig",
    "WalkSatResult",
    "format_report",
    "solve_exact",
    "solve_max_sat",
    "verify_result",
    "walksat",
]
