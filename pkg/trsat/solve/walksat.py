"""WalkSAT/SKC stochastic local search."""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass

import numpy as np

from trsat.cnf.formula import Assignment, CnfFormula, count_satisfied
from trsat.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WalkSatConfig:
    max_flips: int = 100_000
    noise_p: float = 0.5
    restarts: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_flips < 1:
            raise ConfigurationError(f"max_flips must be >= 1, got {self.max_flips}")
        if not (0.0 <= self.noise_p <= 1.0 and math.isfinite(self.noise_p)):
            raise ConfigurationError(f"noise_p must be in [0, 1], got {self.noise_p}")
        if self.restarts < 1:
            raise ConfigurationError(f"restarts must be >= 1, got {self.restarts}")


@dataclass(frozen=True)
class WalkSatResult:
    """``assignment`` is None when the budget ran out; ``flips`` counts every restart."""

    assignment: Assignment | None
    flips: int
    restart: int | None = None

    @property
    def solved(self) -> bool:
        return self.assignment is not None


class _Search:
    """One restart: assignment plus per-clause true-literal counts and the unsat set."""

    def __init__(self, f: CnfFormula, rng: random.Random) -> None:
        self.rng = rng
        self.clauses = [c.to_ints() for c in f.clauses]
        self.values = [rng.random() < 0.5 for _ in range(f.num_variables)]
        self.occurrences: list[list[tuple[int, bool]]] = [[] for _ in range(f.num_variables)]
        for j, lits in enumerate(self.clauses):
            for lit in lits:
                self.occurrences[abs(lit) - 1].append((j, lit > 0))

        self.true_count = [
            sum(1 for lit in lits if self.values[abs(lit) - 1] == (lit > 0)) for lits in self.clauses
        ]
        self.unsat: list[int] = []
        self.position: dict[int, int] = {}
        for j, count in enumerate(self.true_count):
            if count == 0:
                self._mark_unsat(j)

    def _mark_unsat(self, j: int) -> None:
        self.position[j] = len(self.unsat)
        self.unsat.append(j)

    def _mark_sat(self, j: int) -> None:
        idx = self.position.pop(j)
        last = self.unsat.pop()
        if last != j:
            self.unsat[idx] = last
            self.position[last] = idx

    def break_count(self, var: int) -> int:
        """Clauses that become unsatisfied if ``var`` (0-based) flips."""
        value = self.values[var]
        return sum(
            1
            for j, positive in self.occurrences[var]
            if positive == value and self.true_count[j] == 1
        )

    def flip(self, var: int) -> None:
        value = self.values[var]
        self.values[var] = not value
        for j, positive in self.occurrences[var]:
            if positive == value:
                self.true_count[j] -= 1
                if self.true_count[j] == 0:
                    self._mark_unsat(j)
            else:
                self.true_count[j] += 1
                if self.true_count[j] == 1:
                    self._mark_sat(j)

    def pick(self, noise_p: float) -> int:
        clause = self.clauses[self.unsat[self.rng.randrange(len(self.unsat))]]
        variables = [abs(lit) - 1 for lit in clause]
        if self.rng.random() < noise_p:
            return self.rng.choice(variables)
        return min(sorted(variables), key=self.break_count)


def walksat(f: CnfFormula, cfg: WalkSatConfig | None = None) -> WalkSatResult:
    """Search for a satisfying assignment.

    Each restart draws a uniform random assignment, then repeatedly picks a random
    unsatisfied clause and flips either a random variable of it (probability
    ``noise_p``) or the variable breaking the fewest clauses, lowest index on ties.
    Restart ``r`` uses its own RNG stream spawned from ``cfg.seed``, so a larger
    ``max_flips`` replays the same flips as a smaller one.

    Returns:
        Result with the first satisfying assignment in restart order, or None
    """
    cfg = cfg or WalkSatConfig()
    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    total_flips = 0
    for restart, stream in enumerate(streams):
        search = _Search(f, random.Random(int(stream.generate_state(1)[0])))
        for _ in range(cfg.max_flips):
            if not search.unsat:
                break
            search.flip(search.pick(cfg.noise_p))
            total_flips += 1
        if not search.unsat:
            assignment = Assignment(tuple(search.values))
            if not count_satisfied(f, assignment).all_satisfied:
                raise AssertionError("WalkSAT bookkeeping produced a non-satisfying assignment")
            logger.debug(f"WalkSAT solved {f!r} in restart {restart} after {total_flips} flips")
            return WalkSatResult(assignment, total_flips, restart)
    logger.debug(f"WalkSAT gave up on {f!r} after {total_flips} flips")
    return WalkSatResult(None, total_flips)
