"""Solving, oracle queries and timing benchmarks on DIMACS files."""

from __future__ import annotations

import logging
import statistics
import time
from dataclasses import dataclass
from typing import TYPE_CHECKING, TypeVar

from trsat.cnf.dimacs import read_dimacs
from trsat.cnf.oracle import brute_force_max_sat
from trsat.core.config import MAX_ORACLE_CAP
from trsat.exceptions import ConfigurationError, TrsatError
from trsat.nn.checkpoint import load_checkpoint
from trsat.solve.solver import (
    DEFAULT_MAX_ITERS,
    IterationTrace,
    SatResult,
    SatStatus,
    solve_exact,
    solve_max_sat,
)
from trsat.solve.walksat import WalkSatConfig, walksat
from trsat.training.trainer import load_dataset

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

    from trsat.core.executor import ExternalSolver
    from trsat.nn.model import TrsatModel

logger = logging.getLogger(__name__)

SOLVE_MODES = ("maxsat", "exact")
DEFAULT_REPEATS = 5

T = TypeVar("T")


def solve_formula_file(
    model: TrsatModel,
    cnf_path: Path,
    mode: str = "maxsat",
    seed: int = 0,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> SatResult:
    """Run one-shot MaxSAT or the iterative exact loop on a DIMACS file."""
    f = read_dimacs(cnf_path)
    if mode == "exact":
        return solve_exact(model, f, max_iters=max_iters, seed=seed)
    if mode != "maxsat":
        raise TrsatError(f"Unknown solve mode {mode!r}; expected one of {SOLVE_MODES}")
    assignment, stats = solve_max_sat(model, f, seed)
    return SatResult(
        status=SatStatus.SATISFIED if stats.all_satisfied else SatStatus.PARTIAL,
        assignment=assignment,
        satisfied_count=stats.satisfied,
        total_clauses=stats.total,
        iterations=1,
        trace=(IterationTrace(f.num_variables, f.num_clauses),),
    )


def oracle_report(cnf_path: Path, cap: int | None = None, workers: int = 1) -> str:
    """``max_satisfied <best> of <m>`` followed by the witness as a ``v`` line."""
    if cap is not None and not 1 <= cap <= MAX_ORACLE_CAP:
        raise ConfigurationError(f"Oracle cap must be in 1..{MAX_ORACLE_CAP}, got: {cap}")
    f = read_dimacs(cnf_path)
    best, witness = brute_force_max_sat(f, cap=cap, workers=workers)
    literals = " ".join(str(lit) for lit in witness.to_literals())
    return f"max_satisfied {best} of {f.num_clauses}\nv {literals} 0\n"


def _median_seconds(fn: Callable[[], T], repeats: int) -> tuple[float, T]:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times), result


@dataclass(frozen=True)
class BenchRow:
    """Median wall-clock seconds per solver on one instance."""

    name: str
    trsat_seconds: float
    trsat_rate: float
    walksat_seconds: float
    walksat_solved: bool
    external_seconds: float | None = None

    @property
    def trsat_speedup(self) -> float:
        """WalkSAT time over TRSAT time (> 1 means TRSAT is faster)."""
        return self.walksat_seconds / self.trsat_seconds if self.trsat_seconds > 0 else float("inf")

    @property
    def external_speedup(self) -> float | None:
        if self.external_seconds is None:
            return None
        return self.walksat_seconds / self.external_seconds if self.external_seconds > 0 else float("inf")

    def format_line(self) -> str:
        ext = "-" if self.external_seconds is None else f"{self.external_seconds:.6f}"
        ext_speedup = "-" if self.external_speedup is None else f"{self.external_speedup:.3f}"
        return (
            f"{self.name} trsat={self.trsat_seconds:.6f} rate={self.trsat_rate:.4f} "
            f"walksat={self.walksat_seconds:.6f} solved={int(self.walksat_solved)} "
            f"external={ext} speedup_trsat={self.trsat_speedup:.3f} speedup_external={ext_speedup}"
        )


def benchmark(
    model: TrsatModel,
    data_dir: Path,
    repeats: int = DEFAULT_REPEATS,
    walksat_cfg: WalkSatConfig | None = None,
    external: ExternalSolver | None = None,
    seed: int = 0,
) -> list[BenchRow]:
    """Time TRSAT one-shot inference against WalkSAT (and optionally an external solver).

    Every measurement is the median of ``repeats`` wall-clock runs.
    """
    if repeats < 1:
        raise TrsatError(f"repeats must be >= 1, got {repeats}")
    rows = []
    for i, (name, f) in enumerate(load_dataset(data_dir)):
        trsat_time, (_, stats) = _median_seconds(lambda: solve_max_sat(model, f, seed + i), repeats)  # noqa: B023
        walk_time, walk = _median_seconds(lambda: walksat(f, walksat_cfg), repeats)  # noqa: B023
        ext_time = None
        if external is not None:
            solver, path = external, data_dir / name
            ext_time, _ = _median_seconds(lambda: solver.solve(path, f.num_variables), repeats)  # noqa: B023
        row = BenchRow(name, trsat_time, stats.completion_rate, walk_time, walk.solved, ext_time)
        logger.info(row.format_line())
        rows.append(row)
    return rows


def load_model(checkpoint_path: Path) -> TrsatModel:
    model = load_checkpoint(checkpoint_path)
    model.eval()
    return model
