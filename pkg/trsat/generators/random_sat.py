"""Uniform random 3-SAT."""

from __future__ import annotations

import logging

import numpy as np

from trsat.cnf.formula import Clause, CnfFormula, Literal, Polarity
from trsat.exceptions import GeneratorError

logger = logging.getLogger(__name__)


def gen_random_3sat(n: int, m: int, seed: int) -> CnfFormula:
    """Draw a uniform random 3-SAT formula.

    Each clause picks 3 distinct variables uniformly and flips a fair coin for
    each polarity.

    Args:
        n: Number of variables (>= 3)
        m: Number of clauses (>= 1)
        seed: RNG seed

    Returns:
        Formula with ``n`` variables and ``m`` clauses

    Raises:
        GeneratorError: If ``n < 3`` or ``m < 1``
    """
    if n < 3:
        raise GeneratorError(f"Random 3-SAT needs at least 3 variables, got {n}")
    if m < 1:
        raise GeneratorError(f"Random 3-SAT needs at least 1 clause, got {m}")

    rng = np.random.default_rng(seed)
    clauses = []
    for _ in range(m):
        variables = rng.choice(n, size=3, replace=False)
        signs = rng.integers(0, 2, size=3)
        clauses.append(
            Clause(
                tuple(
                    Literal(int(v) + 1, Polarity.POSITIVE if s else Polarity.NEGATIVE)
                    for v, s in zip(variables, signs)
                )
            )
        )
    logger.debug(f"rand3(n={n}, m={m}, seed={seed}) generated")
    return CnfFormula(n, tuple(clauses))
