"""External SAT solver execution (competition-style ``s``/``v`` output)."""

from __future__ import annotations

import logging
import platform
import subprocess
import time
from dataclasses import dataclass
from pathlib import Path

from trsat.cnf.formula import Assignment
from trsat.core.config import config
from trsat.exceptions import SolverExecutionError, SolverNotFoundError

logger = logging.getLogger(__name__)

_SUBPROCESS_FLAGS = (
    getattr(subprocess, "CREATE_NO_WINDOW", 0) if platform.system() == "Windows" else 0
)

# Conventional solver exit codes; neither is a failure.
EXIT_SATISFIABLE = 10
EXIT_UNSATISFIABLE = 20


def _text(value: str | bytes | None) -> str | None:
    """Decode subprocess output that may arrive as bytes (TimeoutExpired carries bytes)."""
    if isinstance(value, bytes):
        return value.decode("utf-8", errors="replace")
    return value


@dataclass(frozen=True)
class ExternalResult:
    """Parsed solver answer.

    ``status`` is ``SATISFIABLE``, ``UNSATISFIABLE`` or ``UNKNOWN``; ``assignment`` is
    set for satisfiable answers that printed a model.
    """

    status: str
    assignment: Assignment | None
    seconds: float
    returncode: int


def parse_solver_output(stdout: str, num_variables: int) -> tuple[str, Assignment | None]:
    """Read the ``s`` status line and the ``v`` model lines.

    Variables missing from the model default to false.

    Raises:
        SolverExecutionError: If no status line is present
    """
    status: str | None = None
    literals: list[int] = []
    for line in stdout.splitlines():
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v "):
            for token in line[2:].split():
                try:
                    literals.append(int(token))
                except ValueError:
                    logger.warning(f"Ignoring unparsable model token {token!r}")
    if status is None:
        raise SolverExecutionError("Solver output has no 's' status line", stdout=stdout)

    if status != "SATISFIABLE" or not literals:
        return status, None
    values = [False] * num_variables
    for lit in literals:
        if lit != 0 and abs(lit) <= num_variables:
            values[abs(lit) - 1] = lit > 0
    return status, Assignment(tuple(values))


class ExternalSolver:
    """Run an external SAT solver binary on DIMACS files."""

    def __init__(self, path: str | Path | None = None, verbose: bool = False) -> None:
        """Initialize solver adapter.

        Args:
            path: Solver executable; defaults to ``config.external_solver_path``
            verbose: Pass the solver's output through to the log
        """
        self._path = Path(path) if path is not None else None
        self._verbose = verbose

    @property
    def path(self) -> Path:
        return self._path if self._path is not None else config.external_solver_path

    @property
    def verbose(self) -> bool:
        """Verbose flag; follows config.set_verbose() at call time."""
        return self._verbose or config.verbose

    def _run(self, cmd: list[str]) -> subprocess.CompletedProcess[str]:
        logger.debug(f"Executing solver command: {' '.join(cmd)}")
        try:
            return subprocess.run(
                cmd,
                capture_output=True,
                encoding="utf-8",
                errors="replace",
                check=False,
                creationflags=_SUBPROCESS_FLAGS,
                timeout=config.timeout,
            )
        except subprocess.TimeoutExpired as e:
            raise SolverExecutionError(
                f"Solver timed out after {e.timeout} seconds",
                stdout=_text(e.output),
                stderr=_text(e.stderr),
                command=cmd,
            ) from e
        except OSError as e:
            raise SolverNotFoundError(f"Failed to run solver executable: {e}") from e

    def solve(self, cnf_path: Path, num_variables: int) -> ExternalResult:
        """Solve one DIMACS file.

        Args:
            cnf_path: DIMACS input
            num_variables: Variable count of the formula, for model decoding

        Returns:
            Parsed answer with wall-clock seconds

        Raises:
            SolverExecutionError: On an unexpected exit code, timeout or unreadable output
            SolverNotFoundError: If the binary cannot be found or started
        """
        cmd = [str(self.path), str(cnf_path)]
        start = time.perf_counter()
        result = self._run(cmd)
        seconds = time.perf_counter() - start

        if self.verbose and result.stdout:
            logger.debug(result.stdout)
        if result.returncode not in (0, EXIT_SATISFIABLE, EXIT_UNSATISFIABLE):
            raise SolverExecutionError(
                "Solver execution failed",
                returncode=result.returncode,
                stdout=result.stdout,
                stderr=result.stderr,
                command=cmd,
            )
        try:
            status, assignment = parse_solver_output(result.stdout, num_variables)
        except SolverExecutionError as e:
            raise SolverExecutionError(
                e.message,
                returncode=result.returncode,
                stdout=result.stdout,
                stderr=result.stderr,
                command=cmd,
            ) from e

        logger.info(f"External solver: {status} in {seconds:.3f}s ({cnf_path.name})")
        return ExternalResult(status, assignment, seconds, result.returncode)
