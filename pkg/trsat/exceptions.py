"""Custom exceptions for trsat package."""

from __future__ import annotations


class TrsatError(Exception):
    """Base exception for all trsat errors."""

    pass


class CnfError(TrsatError):
    """Raised when a CNF object violates its invariants (tautology, bad index)."""

    pass


class AssignmentError(CnfError):
    """Raised when an assignment does not match the formula it is evaluated against."""

    pass


class DimacsError(CnfError):
    """Raised when DIMACS text cannot be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class MalformedHeaderError(DimacsError):
    """Raised when the `p cnf <n> <m>` header is missing, repeated or malformed."""

    pass


class ClauseCountMismatchError(DimacsError):
    """Raised when the number of clauses differs from the header's declaration."""

    pass


class VariableRangeError(DimacsError):
    """Raised when a literal references a variable outside 1..n."""

    pass


class EmptyClauseError(DimacsError):
    """Raised when a clause has no literals."""

    pass


class OracleCapError(TrsatError):
    """Raised when the brute-force oracle is asked to enumerate too many variables."""

    def __init__(self, num_variables: int, cap: int) -> None:
        super().__init__(
            f"Brute-force oracle refuses {num_variables} variables (cap is {cap})"
        )
        self.num_variables = num_variables
        self.cap = cap


class GeneratorError(TrsatError):
    """Raised when generator parameters are out of range."""

    pass


class NetlistError(GeneratorError):
    """Raised when a gate netlist is malformed (unknown wire, cycle, duplicate)."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ShapeError(TrsatError):
    """Raised when matrix or tensor shapes do not line up."""

    pass


class AutodiffError(TrsatError):
    """Raised on non-finite values or misuse of a computation record."""

    pass


class ModelConfigError(TrsatError):
    """Raised when a model configuration is invalid."""

    pass


class CheckpointError(TrsatError):
    """Raised when a checkpoint cannot be written or read."""

    pass


class CheckpointFormatError(CheckpointError):
    """Raised on bad magic bytes, truncated data or parameter shape mismatches."""

    pass


class CheckpointVersionError(CheckpointError):
    """Raised when the checkpoint format version is not supported."""

    def __init__(self, found: int, expected: int) -> None:
        super().__init__(f"Checkpoint format version {found} is not supported (expected {expected})")
        self.found = found
        self.expected = expected


class TrainingError(TrsatError):
    """Raised when training cannot proceed."""

    def __init__(
        self,
        message: str,
        epoch: int | None = None,
        instance: int | None = None,
        parameter: str | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.epoch = epoch
        self.instance = instance
        self.parameter = parameter

    def __str__(self) -> str:
        parts = [self.message]
        if self.epoch is not None:
            parts.append(f"epoch={self.epoch}")
        if self.instance is not None:
            parts.append(f"instance={self.instance}")
        if self.parameter is not None:
            parts.append(f"parameter={self.parameter}")
        return " ".join(parts)


class SolverNotFoundError(TrsatError):
    """Raised when an external SAT solver binary cannot be found or started."""

    def __init__(
        self, message: str = "External SAT solver not found in TRSAT_EXTERNAL_SOLVER or PATH"
    ) -> None:
        super().__init__(message)
        self.message = message


class SolverExecutionError(TrsatError):
    """Raised when an external SAT solver run fails or produces unusable output."""

    def __init__(
        self,
        message: str,
        returncode: int | None = None,
        stdout: str | None = None,
        stderr: str | None = None,
        command: list[str] | None = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.returncode = returncode
        self.stdout = stdout
        self.stderr = stderr
        self.command = command

    def __str__(self) -> str:
        parts = [self.message]
        if self.returncode is not None:
            parts.append(f"Return code: {self.returncode}")
        if self.stderr:
            parts.append(f"STDERR: {self.stderr}")
        return "\n".join(parts)


class ConfigurationError(TrsatError):
    """Raised when configuration is invalid."""

    pass
