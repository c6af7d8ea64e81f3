"""Exhaustive MaxSAT oracle for small formulas."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING

import numpy as np

from trsat.cnf.formula import Assignment
from trsat.core.config import config
from trsat.exceptions import OracleCapError

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from trsat.cnf.formula import CnfFormula

logger = logging.getLogger(__name__)

_CHUNK_BITS = 16


def _bits(start: int, stop: int, n: int) -> NDArray[np.bool_]:
    """Assignment rows for integers in [start, stop); variable 1 is the most significant bit."""
    codes = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(bool)


def _best_in_range(f: CnfFormula, start: int, stop: int) -> tuple[int, int]:
    """Best (count, code) in a code range; ties keep the smallest code."""
    bits = _bits(start, stop, f.num_variables)
    counts = np.zeros(stop - start, dtype=np.int64)
    for clause in f.clauses:
        sat = np.zeros(stop - start, dtype=bool)
        for lit in clause.literals:
            column = bits[:, lit.variable_index - 1]
            sat |= column if lit.polarity > 0 else ~column
        counts += sat
    offset = int(np.argmax(counts))
    return int(counts[offset]), start + offset


def brute_force_max_sat(
    f: CnfFormula,
    cap: int | None = None,
    workers: int = 1,
) -> tuple[int, Assignment]:
    """Maximum number of simultaneously satisfiable clauses, by enumeration.

    Assignments are enumerated as binary numbers with variable 1 as the most
    significant bit, so the witness is the lexicographically smallest optimum.

    Args:
        f: Formula
        cap: Variable cap (defaults to ``config.oracle_cap``)
        workers: Threads sharing the enumeration; the reduction is sequential

    Returns:
        Tuple of (best_count, witness)

    Raises:
        OracleCapError: If the formula has more variables than the cap
    """
    limit = config.oracle_cap if cap is None else cap
    n = f.num_variables
    if n > limit:
        raise OracleCapError(n, limit)

    total = 1 << n
    chunk = 1 << min(_CHUNK_BITS, n)
    ranges = [(start, min(start + chunk, total)) for start in range(0, total, chunk)]

    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: _best_in_range(f, *r), ranges))
    else:
        results = [_best_in_range(f, start, stop) for start, stop in ranges]

    best_count, best_code = -1, 0
    for count, code in results:
        if count > best_count:
            best_count, best_code = count, code

    witness = Assignment.from_bits(_bits(best_code, best_code + 1, n)[0])
    logger.debug(f"Oracle: {best_count}/{f.num_clauses} clauses over {total} assignments")
    return best_count, witness


def is_satisfiable(f: CnfFormula, cap: int | None = None) -> bool:
    """Whether some assignment satisfies every clause (exhaustive)."""
    best, _ = brute_force_max_sat(f, cap=cap)
    return best == f.num_clauses
