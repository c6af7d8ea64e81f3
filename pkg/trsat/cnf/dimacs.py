"""DIMACS CNF reading and writing.

Format: ``c`` comment lines, one ``p cnf <n> <m>`` header, then whitespace-separated
signed integers where ``0`` terminates a clause. Clauses may span lines. A SATLIB-style
``%`` line ends the clause section.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from trsat.cnf.formula import Clause, CnfFormula, Literal
from trsat.exceptions import (
    ClauseCountMismatchError,
    CnfError,
    DimacsError,
    EmptyClauseError,
    MalformedHeaderError,
    VariableRangeError,
)

if TYPE_CHECKING:
    from pathlib import Path

logger = logging.getLogger(__name__)


def parse_dimacs(text: str | bytes) -> CnfFormula:
    """Parse DIMACS CNF text.

    Args:
        text: DIMACS content as str or ASCII bytes

    Returns:
        Parsed formula

    Raises:
        MalformedHeaderError: Missing, repeated or malformed ``p cnf`` header
        ClauseCountMismatchError: Clause count differs from the header
        VariableRangeError: Literal outside 1..n
        EmptyClauseError: A clause with no literals
        DimacsError: Other malformed content (non-integer tokens, unterminated clause)
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as e:
            raise DimacsError(f"DIMACS input is not ASCII: {e}") from e

    num_vars: int | None = None
    num_clauses = 0
    clauses: list[Clause] = []
    current: list[int] = []
    current_line = 0
    lineno = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise MalformedHeaderError("repeated 'p cnf' header", line=lineno)
            fields = line.split()
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise MalformedHeaderError(f"bad header {line!r}", line=lineno)
            try:
                num_vars, num_clauses = int(fields[2]), int(fields[3])
            except ValueError:
                raise MalformedHeaderError(f"non-integer counts in header {line!r}", line=lineno)
            if num_vars < 0 or num_clauses < 0:
                raise MalformedHeaderError(f"negative counts in header {line!r}", line=lineno)
            continue
        if num_vars is None:
            raise MalformedHeaderError("clause data before 'p cnf' header", line=lineno)

        for token in line.split():
            try:
                value = int(token)
            except ValueError:
                raise DimacsError(f"non-integer token {token!r}", line=lineno)
            if value == 0:
                if not current:
                    raise EmptyClauseError(f"empty clause (clause {len(clauses) + 1})", line=lineno)
                try:
                    clauses.append(Clause(tuple(Literal.from_int(v) for v in current)))
                except CnfError as e:
                    raise DimacsError(str(e), line=lineno) from e
                current = []
                continue
            if abs(value) > num_vars:
                raise VariableRangeError(
                    f"literal {value} exceeds declared variable count {num_vars}", line=lineno
                )
            if not current:
                current_line = lineno
            current.append(value)

    if num_vars is None:
        raise MalformedHeaderError("missing 'p cnf' header", line=lineno or None)
    if current:
        raise DimacsError("clause not terminated by 0", line=current_line)
    if len(clauses) != num_clauses:
        raise ClauseCountMismatchError(
            f"header declares {num_clauses} clauses, found {len(clauses)}", line=lineno
        )
    if not clauses:
        raise ClauseCountMismatchError("formula must contain at least one clause", line=lineno)

    formula = CnfFormula(num_vars, tuple(clauses))
    logger.debug(f"Parsed DIMACS: {formula.num_variables} variables, {formula.num_clauses} clauses")
    return formula


def write_dimacs(f: CnfFormula, comments: list[str] | None = None) -> bytes:
    """Serialise a formula as DIMACS CNF.

    Args:
        f: Formula
        comments: Optional comment lines written before the header

    Returns:
        ASCII bytes ending in a newline
    """
    lines = [f"c {comment}" for comment in comments or []]
    lines.append(f"p cnf {f.num_variables} {f.num_clauses}")
    lines.extend(" ".join(str(v) for v in clause.to_ints()) + " 0" for clause in f.clauses)
    return ("\n".join(lines) + "\n").encode("ascii")


def read_dimacs(path: Path) -> CnfFormula:
    """Read and parse a DIMACS file."""
    logger.debug(f"Reading DIMACS file: {path}")
    return parse_dimacs(path.read_bytes())


def write_dimacs_file(path: Path, f: CnfFormula, comments: list[str] | None = None) -> None:
    """Write a formula to a DIMACS file."""
    path.write_bytes(write_dimacs(f, comments))
    logger.info(f"Wrote {path} ({f.num_variables} variables, {f.num_clauses} clauses)")
