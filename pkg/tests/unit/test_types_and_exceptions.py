"""Unit tests for the exception hierarchy and public exports."""

from __future__ import annotations

import pytest

import trsat


class TestExceptions:
    """Validate custom exception hierarchy."""

    def test_everything_is_a_trsat_error(self) -> None:
        for exc in (
            trsat.CnfError,
            trsat.DimacsError,
            trsat.OracleCapError,
            trsat.GeneratorError,
            trsat.ShapeError,
            trsat.AutodiffError,
            trsat.ModelConfigError,
            trsat.CheckpointError,
            trsat.TrainingError,
            trsat.SolverNotFoundError,
            trsat.SolverExecutionError,
            trsat.ConfigurationError,
        ):
            assert issubclass(exc, trsat.TrsatError)

    def test_dimacs_error_line(self) -> None:
        error = trsat.DimacsError("bad header", line=3)
        assert error.line == 3
        assert str(error) == "line 3: bad header"
        assert str(trsat.DimacsError("no header")) == "no header"

    def test_dimacs_subclasses(self) -> None:
        from trsat.exceptions import (
            ClauseCountMismatchError,
            EmptyClauseError,
            MalformedHeaderError,
            VariableRangeError,
        )

        for exc in (
            MalformedHeaderError,
            ClauseCountMismatchError,
            VariableRangeError,
            EmptyClauseError,
        ):
            assert issubclass(exc, trsat.DimacsError)

    def test_netlist_error_is_generator_error(self) -> None:
        error = trsat.NetlistError("unknown gate kind 'NAND'", line=4)
        assert isinstance(error, trsat.GeneratorError)
        assert str(error) == "line 4: unknown gate kind 'NAND'"

    def test_oracle_cap_error(self) -> None:
        error = trsat.OracleCapError(30, 24)
        assert (error.num_variables, error.cap) == (30, 24)
        assert "30 variables" in str(error)

    def test_checkpoint_version_error(self) -> None:
        error = trsat.CheckpointVersionError(found=2, expected=1)
        assert isinstance(error, trsat.CheckpointError)
        assert "version 2" in str(error)

    def test_training_error_diagnostics(self) -> None:
        error = trsat.TrainingError("Non-finite gradient", epoch=3, instance=7, parameter="readout.weight")
        assert str(error) == "Non-finite gradient epoch=3 instance=7 parameter=readout.weight"

    def test_solver_execution_error(self) -> None:
        error = trsat.SolverExecutionError(
            "Solver execution failed",
            returncode=1,
            stderr="c parse error",
        )
        assert error.returncode == 1
        assert "c parse error" in str(error)

    def test_solver_not_found_default_message(self) -> None:
        with pytest.raises(trsat.SolverNotFoundError, match="TRSAT_EXTERNAL_SOLVER"):
            raise trsat.SolverNotFoundError()


class TestExports:
    def test_version(self) -> None:
        assert trsat.__version__ == "0.1.0a1"

    def test_all_names_resolve(self) -> None:
        for name in trsat.__all__:
            assert hasattr(trsat, name), name
