"""CNF data model: literals, clauses, formulas, assignments and their evaluation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from trsat.exceptions import AssignmentError, CnfError

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from numpy.typing import NDArray

logger = logging.getLogger(__name__)


class Polarity(IntEnum):
    """Sign of a literal occurrence (also the edge sign of the bipartite graph)."""

    POSITIVE = 1
    NEGATIVE = -1


@dataclass(frozen=True, order=True)
class Literal:
    """A variable (1-based, as in DIMACS) together with its polarity."""

    variable_index: int
    polarity: Polarity

    def __post_init__(self) -> None:
        if self.variable_index < 1:
            raise CnfError(f"Variable index must be >= 1, got {self.variable_index}")
        if self.polarity not in (Polarity.POSITIVE, Polarity.NEGATIVE):
            raise CnfError(f"Polarity must be +1 or -1, got {self.polarity!r}")
        object.__setattr__(self, "polarity", Polarity(self.polarity))

    @classmethod
    def from_int(cls, value: int) -> Literal:
        """Build a literal from a signed DIMACS integer."""
        if value == 0:
            raise CnfError("0 is not a literal")
        return cls(abs(value), Polarity.POSITIVE if value > 0 else Polarity.NEGATIVE)

    def to_int(self) -> int:
        return self.variable_index * int(self.polarity)

    def is_true(self, value: bool) -> bool:
        """Whether the literal holds when its variable takes ``value``."""
        return value if self.polarity is Polarity.POSITIVE else not value

    def __str__(self) -> str:
        return str(self.to_int())


@dataclass(frozen=True)
class Clause:
    """A non-empty disjunction of literals over distinct variables.

    Duplicate literals are dropped with a warning; a clause holding both
    polarities of a variable is rejected.
    """

    literals: tuple[Literal, ...]

    def __post_init__(self) -> None:
        literals = tuple(self.literals)
        if not literals:
            raise CnfError("Clause must contain at least one literal")

        seen: dict[int, Polarity] = {}
        unique: list[Literal] = []
        for lit in literals:
            previous = seen.get(lit.variable_index)
            if previous is None:
                seen[lit.variable_index] = lit.polarity
                unique.append(lit)
            elif previous is lit.polarity:
                logger.warning(f"Duplicate literal {lit} removed from clause")
            else:
                raise CnfError(f"Tautological clause: variable {lit.variable_index} in both polarities")
        object.__setattr__(self, "literals", tuple(unique))

    @classmethod
    def from_ints(cls, values: Iterable[int]) -> Clause:
        """Build a clause from signed DIMACS integers (no trailing 0)."""
        return cls(tuple(Literal.from_int(v) for v in values))

    def to_ints(self) -> list[int]:
        return [lit.to_int() for lit in self.literals]

    @property
    def variables(self) -> tuple[int, ...]:
        """1-based variable indices in literal order."""
        return tuple(lit.variable_index for lit in self.literals)

    def __len__(self) -> int:
        return len(self.literals)


@dataclass(frozen=True)
class Assignment:
    """Truth values for variables 1..n, stored 0-based."""

    values: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(bool(v) for v in self.values))

    @classmethod
    def from_bits(cls, bits: Iterable[int | bool]) -> Assignment:
        return cls(tuple(bool(b) for b in bits))

    def as_array(self) -> NDArray[np.bool_]:
        return np.asarray(self.values, dtype=bool)

    def to_literals(self) -> list[int]:
        """Signed DIMACS literals, one per variable."""
        return [i + 1 if v else -(i + 1) for i, v in enumerate(self.values)]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CompletionStats:
    """Clause satisfaction summary of an assignment.

    ``unsat_clause_ids`` are 1-based clause positions, ascending.
    """

    satisfied: int
    total: int
    unsat_clause_ids: tuple[int, ...] = ()

    @property
    def completion_rate(self) -> float:
        return self.satisfied / self.total if self.total else 1.0

    @property
    def all_satisfied(self) -> bool:
        return self.satisfied == self.total


@dataclass(frozen=True)
class LiteralEdges:
    """Flat per-occurrence arrays: variable (0-based), clause (0-based), sign."""

    variables: NDArray[np.int64]
    clauses: NDArray[np.int64]
    signs: NDArray[np.int64]


@dataclass(frozen=True)
class CnfFormula:
    """A CNF formula over variables 1..num_variables."""

    num_variables: int
    clauses: tuple[Clause, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.num_variables < 0:
            raise CnfError(f"Variable count must be non-negative, got {self.num_variables}")
        if not self.clauses:
            raise CnfError("Formula must contain at least one clause")
        for j, clause in enumerate(self.clauses, start=1):
            for lit in clause.literals:
                if lit.variable_index > self.num_variables:
                    raise CnfError(
                        f"Clause {j} references variable {lit.variable_index} "
                        f"but the formula has {self.num_variables}"
                    )

    @classmethod
    def from_ints(cls, num_variables: int, clauses: Iterable[Iterable[int]]) -> CnfFormula:
        """Build a formula from lists of signed DIMACS integers."""
        return cls(num_variables, tuple(Clause.from_ints(c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def num_literals(self) -> int:
        return sum(len(c) for c in self.clauses)

    @cached_property
    def edges(self) -> LiteralEdges:
        """Literal occurrences flattened in clause order."""
        variables: list[int] = []
        clause_ids: list[int] = []
        signs: list[int] = []
        for j, clause in enumerate(self.clauses):
            for lit in clause.literals:
                variables.append(lit.variable_index - 1)
                clause_ids.append(j)
                signs.append(int(lit.polarity))
        return LiteralEdges(
            variables=np.asarray(variables, dtype=np.int64),
            clauses=np.asarray(clause_ids, dtype=np.int64),
            signs=np.asarray(signs, dtype=np.int64),
        )

    def to_ints(self) -> list[list[int]]:
        return [c.to_ints() for c in self.clauses]

    def __repr__(self) -> str:
        return f"CnfFormula(n={self.num_variables}, m={self.num_clauses})"


def clause_satisfaction(f: CnfFormula, values: Sequence[bool] | NDArray[np.bool_]) -> NDArray[np.bool_]:
    """Per-clause satisfaction flags under a full assignment vector.

    Args:
        f: Formula
        values: Truth values, 0-based, length ``f.num_variables``

    Returns:
        Boolean array of length ``f.num_clauses``

    Raises:
        AssignmentError: If the vector length does not match
    """
    arr = np.asarray(values, dtype=bool)
    if arr.shape != (f.num_variables,):
        raise AssignmentError(
            f"Assignment has {arr.shape[0] if arr.ndim else 0} values, formula has {f.num_variables} variables"
        )
    edges = f.edges
    literal_true = arr[edges.variables] == (edges.signs > 0)
    satisfied = np.zeros(f.num_clauses, dtype=bool)
    np.logical_or.at(satisfied, edges.clauses, literal_true)
    return satisfied


def count_satisfied(f: CnfFormula, a: Assignment) -> CompletionStats:
    """Count the clauses of ``f`` satisfied by ``a``.

    Raises:
        AssignmentError: If the assignment length differs from the variable count
    """
    if len(a) != f.num_variables:
        raise AssignmentError(
            f"Assignment has {len(a)} values, formula has {f.num_variables} variables"
        )
    satisfied = clause_satisfaction(f, a.as_array())
    unsat = tuple(int(j) + 1 for j in np.flatnonzero(~satisfied))
    return CompletionStats(
        satisfied=int(satisfied.sum()),
        total=f.num_clauses,
        unsat_clause_ids=unsat,
    )
