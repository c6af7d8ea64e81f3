"""Unit tests for the WalkSAT baseline."""

from __future__ import annotations

import random

import pytest

from trsat.cnf.formula import Assignment, CnfFormula, count_satisfied
from trsat.exceptions import ConfigurationError
from trsat.generators.random_sat import gen_random_3sat
from trsat.solve import WalkSatConfig, walksat


def _planted(seed: int, n: int = 20, m: int = 150) -> CnfFormula:
    """Random 3-SAT clauses filtered to those a hidden assignment satisfies."""
    rng = random.Random(seed)
    hidden = Assignment(tuple(rng.random() < 0.5 for _ in range(n)))
    f = gen_random_3sat(n, m, seed)
    kept = [c.to_ints() for c in f.clauses if count_satisfied(CnfFormula(n, (c,)), hidden).all_satisfied]
    return CnfFormula.from_ints(n, kept)


class TestWalkSat:
    def test_trivial_formula(self) -> None:
        f = CnfFormula.from_ints(2, [[1], [1, 2]])
        result = walksat(f, WalkSatConfig(max_flips=100, seed=1))
        assert result.solved
        assert result.assignment is not None
        assert result.assignment.values[0] is True
        assert result.restart == 0

    def test_contradiction_exhausts_budget(self) -> None:
        f = CnfFormula.from_ints(1, [[1], [-1]])
        result = walksat(f, WalkSatConfig(max_flips=50, restarts=3))
        assert not result.solved
        assert result.assignment is None
        assert result.flips == 150
        assert result.restart is None

    def test_solution_satisfies(self) -> None:
        f = _planted(3)
        result = walksat(f, WalkSatConfig(max_flips=10_000, restarts=3, seed=3))
        assert result.assignment is not None
        assert count_satisfied(f, result.assignment).all_satisfied

    def test_deterministic(self) -> None:
        f = gen_random_3sat(20, 80, seed=8)
        cfg = WalkSatConfig(max_flips=2_000, restarts=2, seed=5)
        assert walksat(f, cfg) == walksat(f, cfg)

    def test_larger_budget_replays_smaller(self) -> None:
        f = _planted(2)
        full = walksat(f, WalkSatConfig(max_flips=20_000, seed=4))
        assert full.solved
        exact = walksat(f, WalkSatConfig(max_flips=max(full.flips, 1), seed=4))
        assert exact == full
        if full.flips > 1:
            assert not walksat(f, WalkSatConfig(max_flips=full.flips - 1, seed=4)).solved

    @pytest.mark.parametrize(
        "kwargs",
        [{"max_flips": 0}, {"noise_p": 1.5}, {"noise_p": -0.1}, {"restarts": 0}],
    )
    def test_invalid_config(self, kwargs: dict[str, float]) -> None:
        with pytest.raises(ConfigurationError):
            WalkSatConfig(**kwargs)  # type: ignore[arg-type]
