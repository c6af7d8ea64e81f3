"""Unit tests for the smoothmax satisfaction objective."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
import pytest
import torch

from trsat.cnf.formula import Assignment, CnfFormula, count_satisfied
from trsat.cnf.oracle import brute_force_max_sat
from trsat.exceptions import ModelConfigError, ShapeError
from trsat.generators.random_sat import gen_random_3sat
from trsat.nn.autodiff import DTYPE
from trsat.nn.loss import clause_scores, literal_value, neg_log_loss, phi_approx, smoothmax
from trsat.nn.model import VariableOutputs, threshold

if TYPE_CHECKING:
    from collections.abc import Callable

    GradientCheck = Callable[[Callable[[], torch.Tensor], list[torch.Tensor]], int]


class TestLiteralValue:
    @pytest.mark.parametrize(
        ("x", "e", "expected"),
        [(0.8, 1, 0.8), (0.8, -1, 0.2), (0.0, -1, 1.0), (1.0, 1, 1.0)],
    )
    def test_values(self, x: float, e: int, expected: float) -> None:
        assert literal_value(x, e) == pytest.approx(expected)


class TestSmoothmax:
    def test_equal_values(self) -> None:
        assert smoothmax([0.3, 0.3, 0.3], tau=5.0).item() == pytest.approx(0.3)

    def test_two_values(self) -> None:
        assert smoothmax([0.0, 1.0], tau=5.0).item() == pytest.approx(1 / (1 + math.exp(-5)))
        assert smoothmax([0.0, 1.0], tau=5.0).item() == pytest.approx(0.993307, abs=1e-6)

    def test_between_mean_and_max(self) -> None:
        values = [0.1, 0.4, 0.9]
        s = smoothmax(values, tau=2.0).item()
        assert sum(values) / 3 <= s <= max(values)

    def test_approaches_max_monotonically(self) -> None:
        values = [0.2, 0.5, 0.7]
        scores = [smoothmax(values, tau).item() for tau in (1.0, 5.0, 20.0, 100.0)]
        assert scores == sorted(scores)
        assert scores[-1] == pytest.approx(0.7, abs=1e-6)

    def test_stable_for_large_tau(self) -> None:
        assert math.isfinite(smoothmax([0.0, 1.0], tau=1e4).item())

    def test_empty(self) -> None:
        with pytest.raises(ShapeError):
            smoothmax([], tau=5.0)

    @pytest.mark.parametrize("tau", [0.0, -1.0, math.inf])
    def test_bad_tau(self, tau: float) -> None:
        with pytest.raises(ModelConfigError):
            smoothmax([0.5], tau=tau)


class TestClauseScores:
    def test_matches_per_clause_smoothmax(self, example_formula: CnfFormula) -> None:
        x = torch.tensor([0.9, 0.2, 0.6, 0.4], dtype=DTYPE)
        scores = clause_scores(x, example_formula, tau=5.0)
        for j, clause in enumerate(example_formula.clauses):
            lits = [literal_value(float(x[abs(lit) - 1]), 1 if lit > 0 else -1) for lit in clause.to_ints()]
            assert scores[j].item() == pytest.approx(smoothmax(lits, tau=5.0).item())

    def test_accepts_variable_outputs(self, example_formula: CnfFormula) -> None:
        x = torch.full((4,), 0.5, dtype=DTYPE)
        assert torch.equal(clause_scores(VariableOutputs(x), example_formula, 5.0), clause_scores(x, example_formula, 5.0))

    def test_wrong_length(self, example_formula: CnfFormula) -> None:
        with pytest.raises(ShapeError):
            clause_scores([0.5, 0.5], example_formula, 5.0)


class TestLoss:
    def test_half_everywhere(self, example_formula: CnfFormula) -> None:
        loss = neg_log_loss([0.5, 0.5, 0.5, 0.5], example_formula, tau=5.0)
        assert loss.item() == pytest.approx(3 * math.log(2))
        assert loss.item() == pytest.approx(2.0794415, abs=1e-7)
        assert phi_approx([0.5] * 4, example_formula, 5.0).item() == pytest.approx(0.125)

    def test_satisfied_unit_clause(self) -> None:
        f = CnfFormula.from_ints(1, [[1]])
        assert neg_log_loss([1.0], f, tau=5.0).item() == pytest.approx(0.0)
        assert neg_log_loss([0.0], f, tau=5.0).item() == pytest.approx(-math.log(1e-12))

    def test_lower_for_satisfying_corner(self, example_formula: CnfFormula) -> None:
        good = [0.0, 1.0, 1.0, 1.0]
        bad = [1.0, 0.0, 1.0, 0.0]
        assert count_satisfied(example_formula, Assignment.from_bits(good)).all_satisfied
        assert neg_log_loss(good, example_formula, 5.0) < neg_log_loss(bad, example_formula, 5.0)

    def test_phi_is_product_of_scores(self) -> None:
        f = gen_random_3sat(8, 20, seed=2)
        x = torch.rand(8, dtype=DTYPE, generator=torch.Generator().manual_seed(0))
        assert phi_approx(x, f, 5.0).item() == pytest.approx(torch.prod(clause_scores(x, f, 5.0)).item())

    def test_gradient(self, check_gradients: GradientCheck) -> None:
        f = gen_random_3sat(6, 15, seed=1)
        x = torch.nn.Parameter(torch.rand(6, dtype=DTYPE, generator=torch.Generator().manual_seed(3)))
        assert check_gradients(lambda: neg_log_loss(x, f, 5.0), [x]) > 0

    def test_confident_satisfying_outputs_keep_loss_low(self) -> None:
        # threshold(x) satisfies every clause and each clause has a literal value >= 0.9
        rng = np.random.default_rng(7)
        checked = 0
        for seed in range(40):
            f = gen_random_3sat(10, 30, seed)
            best, witness = brute_force_max_sat(f)
            if best < f.num_clauses:
                continue
            bits = np.asarray(witness.values)
            x = np.where(bits, rng.uniform(0.9, 1.0, 10), rng.uniform(0.0, 0.1, 10))
            assert count_satisfied(f, threshold(x.tolist(), eps=0.01)).all_satisfied
            assert neg_log_loss(x.tolist(), f, tau=5.0).item() < 0.25 * f.num_clauses
            checked += 1
        assert checked >= 10
