"""Unit tests for trsat configuration helpers and settings files."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import pytest

import trsat
from trsat.core.config import DEFAULT_ORACLE_CAP, Config
from trsat.core.settings import parse_settings, read_settings
from trsat.exceptions import ConfigurationError, SolverNotFoundError

if TYPE_CHECKING:
    from pathlib import Path


class TestConfig:
    """Validate configuration plumbing without invoking a solver."""

    def test_config_singleton(self) -> None:
        """The public config object should behave as a singleton alias."""
        assert trsat.config is trsat.config

    def test_set_solver_path_valid(self, tmp_path: Path) -> None:
        """Setting the solver path accepts existing executables."""
        solver = tmp_path / "kissat"
        solver.touch()
        solver.chmod(0o755)

        config = Config()
        config.set_external_solver_path(solver)
        assert config.external_solver_path == solver

    def test_set_solver_path_nonexistent(self) -> None:
        config = Config()
        with pytest.raises(ConfigurationError, match="not found"):
            config.set_external_solver_path("/nonexistent/path/to/solver")

    def test_set_solver_path_directory(self, tmp_path: Path) -> None:
        config = Config()
        with pytest.raises(ConfigurationError, match="not a file"):
            config.set_external_solver_path(tmp_path)

    def test_verbose_setting(self) -> None:
        config = Config()

        config.set_verbose(True)
        assert config.verbose

        config.set_verbose(False)
        assert not config.verbose

    def test_env_solver_path(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        """TRSAT_EXTERNAL_SOLVER wins over the PATH lookup."""
        solver = tmp_path / "glucose"
        solver.touch()
        monkeypatch.setenv("TRSAT_EXTERNAL_SOLVER", str(solver))

        assert Config().external_solver_path == solver

    def test_solver_not_found(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv("TRSAT_EXTERNAL_SOLVER", raising=False)
        monkeypatch.setattr("trsat.core.config.shutil.which", lambda _name: None)

        with pytest.raises(SolverNotFoundError, match="TRSAT_EXTERNAL_SOLVER"):
            _ = Config().external_solver_path

    def test_invalid_env_path_falls_back_to_path(
        self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch, caplog: pytest.LogCaptureFixture
    ) -> None:
        found = tmp_path / "cadical"
        found.touch()
        monkeypatch.setenv("TRSAT_EXTERNAL_SOLVER", str(tmp_path / "missing"))
        monkeypatch.setattr(
            "trsat.core.config.shutil.which",
            lambda name: str(found) if name.startswith("cadical") else None,
        )

        with caplog.at_level(logging.WARNING, logger="trsat.core.config"):
            assert Config().external_solver_path == found
        assert "invalid path" in caplog.text


class TestTimeout:
    """set_timeout validation."""

    def test_valid_values(self) -> None:
        config = Config()
        config.set_timeout(30)
        assert config.timeout == 30
        config.set_timeout(0.5)
        assert config.timeout == 0.5
        config.set_timeout(None)
        assert config.timeout is None

    @pytest.mark.parametrize("bad", [0, -5, float("inf"), float("nan")])
    def test_rejects_non_positive_and_non_finite(self, bad: float) -> None:
        with pytest.raises(ConfigurationError, match="positive and finite"):
            Config().set_timeout(bad)


class TestOracleCap:
    """The brute-force oracle variable cap."""

    def test_default(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv("TRSAT_ORACLE_CAP", raising=False)
        assert Config().oracle_cap == DEFAULT_ORACLE_CAP == 24

    def test_env_override(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("TRSAT_ORACLE_CAP", "12")
        assert Config().oracle_cap == 12

    def test_invalid_env_is_ignored(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("TRSAT_ORACLE_CAP", "lots")
        assert Config().oracle_cap == DEFAULT_ORACLE_CAP

    @pytest.mark.parametrize("bad", [0, 41, -1])
    def test_out_of_range(self, bad: int) -> None:
        with pytest.raises(ConfigurationError, match="1..40"):
            Config().set_oracle_cap(bad)

    def test_module_helper_updates_global(self) -> None:
        trsat.set_oracle_cap(10)
        assert trsat.config.oracle_cap == 10


class TestSettingsFiles:
    """``key = value`` settings text."""

    def test_parse_with_comments(self) -> None:
        text = "# defaults\nseed = 7\n\nout = runs/a  # trailing comment\n"
        assert parse_settings(text) == {"seed": "7", "out": "runs/a"}

    def test_missing_separator(self) -> None:
        with pytest.raises(ConfigurationError, match="cfg:2"):
            parse_settings("seed = 1\nverbose\n", source="cfg")

    def test_duplicate_key(self) -> None:
        with pytest.raises(ConfigurationError, match="duplicate key"):
            parse_settings("seed = 1\nseed = 2\n")

    def test_read_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigurationError, match="Cannot read settings file"):
            read_settings(tmp_path / "absent.cfg")

    def test_read_file(self, tmp_path: Path) -> None:
        path = tmp_path / "run.cfg"
        path.write_text("epochs = 3\ntau = 5.0\n", encoding="utf-8")
        assert read_settings(path) == {"epochs": "3", "tau": "5.0"}
