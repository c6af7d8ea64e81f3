"""Meta-path and sparse-attention agreement with brute-force references."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
import pytest
import torch

from trsat.cnf.formula import Polarity
from trsat.generators.random_sat import gen_random_3sat
from trsat.graph import META_PATH_KEYS, SparseMatrix, build_graph_artifacts
from trsat.nn.autodiff import DTYPE, attention_coefficients, sparse_attention

if TYPE_CHECKING:
    from trsat.cnf.formula import CnfFormula


def _two_hop_counts(f: CnfFormula) -> tuple[dict[tuple[Polarity, Polarity], np.ndarray], ...]:
    """Signed two-hop path counts by walking every clause and variable pair."""
    n, m = f.num_variables, f.num_clauses
    signs = [{lit.variable_index - 1: lit.polarity for lit in c.literals} for c in f.clauses]
    var_counts = {key: np.zeros((n, n)) for key in META_PATH_KEYS}
    clause_counts = {key: np.zeros((m, m)) for key in META_PATH_KEYS}
    for s, t in META_PATH_KEYS:
        for clause in signs:
            for i, si in clause.items():
                for k, tk in clause.items():
                    if si is s and tk is t:
                        var_counts[(s, t)][i, k] += 1
        for j, cj in enumerate(signs):
            for other, cl in enumerate(signs):
                clause_counts[(s, t)][j, other] = sum(1 for v, sv in cj.items() if sv is s and cl.get(v) is t)
    return var_counts, clause_counts


def _random_formulas(count: int, seed: int) -> list[CnfFormula]:
    rng = np.random.default_rng(seed)
    formulas = []
    for i in range(count):
        n = int(rng.integers(3, 21))
        m = int(rng.integers(1, 91))
        formulas.append(gen_random_3sat(n, m, seed=1000 + i))
    return formulas


class TestMetaPathOracle:
    def test_hundred_random_formulas(self) -> None:
        for f in _random_formulas(100, seed=0):
            paths = build_graph_artifacts(f).meta_paths
            var_counts, clause_counts = _two_hop_counts(f)
            for key in META_PATH_KEYS:
                np.testing.assert_array_equal(paths.var_counts[key].to_dense(), var_counts[key])
                np.testing.assert_array_equal(paths.clause_counts[key].to_dense(), clause_counts[key])
                np.testing.assert_array_equal(paths.var_side[key].to_dense(), var_counts[key] > 0)
                np.testing.assert_array_equal(paths.clause_side[key].to_dense(), clause_counts[key] > 0)

    def test_diagonals_are_polarity_degrees(self) -> None:
        for f in _random_formulas(20, seed=1):
            artifacts = build_graph_artifacts(f)
            for polarity in Polarity:
                side = artifacts.biadjacency.side(polarity).to_dense()
                key = (polarity, polarity)
                np.testing.assert_array_equal(
                    np.diag(artifacts.meta_paths.var_counts[key].to_dense()), side.sum(axis=1)
                )
                np.testing.assert_array_equal(
                    np.diag(artifacts.meta_paths.clause_counts[key].to_dense()), side.sum(axis=0)
                )


def _dense_attention(
    q: torch.Tensor, k: torch.Tensor, v: torch.Tensor, mask: np.ndarray, heads: int
) -> torch.Tensor:
    d, dv = q.shape[1] // heads, v.shape[1] // heads
    blocks = []
    for h in range(heads):
        scores = q[:, h * d : (h + 1) * d] @ k[:, h * d : (h + 1) * d].T / math.sqrt(d)
        scores = scores.masked_fill(~torch.from_numpy(mask), -math.inf)
        blocks.append(torch.softmax(scores, dim=1).nan_to_num(0.0) @ v[:, h * dv : (h + 1) * dv])
    return torch.cat(blocks, dim=1)


class TestAttentionOracle:
    @pytest.mark.parametrize("heads", [1, 2, 4])
    def test_matches_dense_masked_softmax(self, heads: int) -> None:
        rng = np.random.default_rng(heads)
        gen = torch.Generator().manual_seed(heads)
        for _ in range(10):
            rows, cols = int(rng.integers(1, 33)), int(rng.integers(1, 33))
            mask = rng.random((rows, cols)) < rng.uniform(0.05, 0.6)
            q = torch.randn(rows, 4 * heads, dtype=DTYPE, generator=gen)
            k = torch.randn(cols, 4 * heads, dtype=DTYPE, generator=gen)
            v = torch.randn(cols, 2 * heads, dtype=DTYPE, generator=gen)
            topology = SparseMatrix.from_dense(mask.astype(float))

            out = sparse_attention(q, k, v, topology, heads)
            assert torch.allclose(out, _dense_attention(q, k, v, mask, heads), atol=1e-12, rtol=0)

    def test_coefficient_rows_sum_to_one(self) -> None:
        rng = np.random.default_rng(7)
        gen = torch.Generator().manual_seed(7)
        for _ in range(10):
            n = int(rng.integers(2, 33))
            mask = rng.random((n, n)) < 0.3
            mask[np.arange(n), np.arange(n)] = True
            topology = SparseMatrix.from_dense(mask.astype(float))
            q = torch.randn(n, 8, dtype=DTYPE, generator=gen)
            k = torch.randn(n, 8, dtype=DTYPE, generator=gen)

            alpha = attention_coefficients(q, k, topology, heads=2)
            rows = torch.from_numpy(topology.row_indices)
            sums = torch.zeros(n, 2, dtype=DTYPE).index_add(0, rows, alpha)
            assert torch.allclose(sums, torch.ones(n, 2, dtype=DTYPE), atol=1e-9, rtol=0)
