"""Configuration management for trsat."""

from __future__ import annotations

import logging
import math
import os
import platform
import shutil
from pathlib import Path
from typing import Final

from trsat.exceptions import ConfigurationError, SolverNotFoundError

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP: Final = 24
MAX_ORACLE_CAP: Final = 40
KNOWN_SOLVERS: Final = ("kissat", "cadical")


class Config:
    """Global configuration for trsat."""

    def __init__(self) -> None:
        self._solver_path: Path | None = None
        self._verbose: bool = False
        self._timeout: float | None = None
        self._oracle_cap: int | None = None

    @property
    def external_solver_path(self) -> Path:
        """Get path to the external SAT solver executable.

        Returns:
            Path to solver executable

        Raises:
            SolverNotFoundError: If no solver executable can be found
        """
        if self._solver_path is None:
            self._solver_path = self._find_solver_executable()
        return self._solver_path

    def set_external_solver_path(self, path: str | Path) -> None:
        """Set custom external solver path.

        Args:
            path: Path to solver executable

        Raises:
            ConfigurationError: If path is invalid or not executable
        """
        path_obj = Path(path)
        if not path_obj.exists():
            raise ConfigurationError(f"Solver executable not found at: {path}")
        if not path_obj.is_file():
            raise ConfigurationError(f"Solver path is not a file: {path}")

        if platform.system() != "Windows" and not os.access(path_obj, os.X_OK):
            raise ConfigurationError(f"Solver binary is not executable: {path}")

        self._solver_path = path_obj
        logger.info(f"External solver path set to: {path_obj}")

    @property
    def timeout(self) -> float | None:
        """Get subprocess timeout in seconds (None = no timeout)."""
        return self._timeout

    def set_timeout(self, timeout: float | None) -> None:
        """Set timeout for external solver subprocess calls.

        Args:
            timeout: Timeout in seconds, or None to disable (default)

        Raises:
            ConfigurationError: If timeout is not positive
        """
        if timeout is not None and (timeout <= 0 or not math.isfinite(timeout)):
            raise ConfigurationError(f"Timeout must be positive and finite, got: {timeout}")
        self._timeout = timeout
        logger.info(f"Subprocess timeout: {timeout}")

    @property
    def verbose(self) -> bool:
        """Get verbose output setting."""
        return self._verbose

    def set_verbose(self, verbose: bool) -> None:
        """Set verbose output mode.

        Args:
            verbose: Log external solver output at debug level
        """
        self._verbose = verbose
        logger.info(f"Verbose mode: {verbose}")

    @property
    def oracle_cap(self) -> int:
        """Largest variable count the brute-force oracle will enumerate.

        Reads ``TRSAT_ORACLE_CAP`` on first access when no explicit value was set.
        """
        if self._oracle_cap is None:
            env_cap = os.environ.get("TRSAT_ORACLE_CAP")
            if env_cap:
                try:
                    self.set_oracle_cap(int(env_cap))
                except (ValueError, ConfigurationError):
                    logger.warning(f"Ignoring invalid TRSAT_ORACLE_CAP: {env_cap!r}")
                    self._oracle_cap = DEFAULT_ORACLE_CAP
            else:
                self._oracle_cap = DEFAULT_ORACLE_CAP
        assert self._oracle_cap is not None
        return self._oracle_cap

    def set_oracle_cap(self, cap: int) -> None:
        """Set the brute-force oracle variable cap.

        Args:
            cap: Maximum number of variables (1..MAX_ORACLE_CAP)

        Raises:
            ConfigurationError: If cap is out of range
        """
        if not 1 <= cap <= MAX_ORACLE_CAP:
            raise ConfigurationError(f"Oracle cap must be in 1..{MAX_ORACLE_CAP}, got: {cap}")
        self._oracle_cap = cap
        logger.info(f"Oracle variable cap: {cap}")

    def _find_solver_executable(self) -> Path:
        """Find an external SAT solver executable.

        Returns:
            Path to solver executable

        Raises:
            SolverNotFoundError: If no solver can be found
        """
        env_path = os.environ.get("TRSAT_EXTERNAL_SOLVER")
        if env_path:
            path = Path(env_path)
            if path.exists() and path.is_file():
                logger.info(f"Found solver from TRSAT_EXTERNAL_SOLVER: {path}")
                return path
            logger.warning(f"TRSAT_EXTERNAL_SOLVER points to invalid path: {env_path}")

        for name in KNOWN_SOLVERS:
            exe_name = f"{name}.exe" if platform.system() == "Windows" else name
            which_result = shutil.which(exe_name)
            if which_result:
                logger.info(f"Found solver in system PATH: {which_result}")
                return Path(which_result)

        raise SolverNotFoundError(
            "External SAT solver not found. Install one of "
            f"{', '.join(KNOWN_SOLVERS)} or set TRSAT_EXTERNAL_SOLVER."
        )


# Global configuration instance
config: Final[Config] = Config()


def set_external_solver_path(path: str | Path) -> None:
    """Set custom external solver path.

    Args:
        path: Path to solver executable
    """
    config.set_external_solver_path(path)


def set_verbose(verbose: bool) -> None:
    """Set verbose output mode.

    Args:
        verbose: Log external solver output at debug level
    """
    config.set_verbose(verbose)


def set_timeout(timeout: float | None) -> None:
    """Set timeout for external solver subprocess calls.

    Args:
        timeout: Timeout in seconds, or None to disable (default)
    """
    config.set_timeout(timeout)


def set_oracle_cap(cap: int) -> None:
    """Set the brute-force oracle variable cap.

    Args:
        cap: Maximum number of variables
    """
    config.set_oracle_cap(cap)
