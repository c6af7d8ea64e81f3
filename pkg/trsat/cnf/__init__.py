"""CNF data model, DIMACS I/O and the exhaustive MaxSAT oracle."""

from __future__ import annotations

from trsat.cnf.dimacs import parse_dimacs, read_dimacs, write_dimacs, write_dimacs_file
from trsat.cnf.formula import (
    Assignment,
    Clause,
    CnfFormula,
    CompletionStats,
    Literal,
    LiteralEdges,
    Polarity,
    clause_satisfaction,
    count_satisfied,
)
from trsat.cnf.oracle import brute_force_max_sat, is_satisfiable

__all__ = [
    "Assignment",
    "Clause",
    "CnfFormula",
    "CompletionStats",
    "Literal",
    "LiteralEdges",
    "Polarity",
    "brute_force_max_sat",
    "clause_satisfaction",
    "count_satisfied",
    "is_satisfiable",
    "parse_dimacs",
    "read_dimacs",
    "write_dimacs",
    "write_dimacs_file",
]
