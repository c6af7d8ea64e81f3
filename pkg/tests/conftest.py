"""Shared test fixtures for trsat tests."""

from __future__ import annotations

import os
from typing import TYPE_CHECKING

import pytest
import torch

from trsat.cnf.dimacs import write_dimacs_file
from trsat.cnf.formula import CnfFormula
from trsat.core.config import config
from trsat.graph.bipartite import build_graph_artifacts
from trsat.nn.autodiff import autograd_gradients, finite_difference_gradients
from trsat.nn.model import ModelConfig, init_model

if TYPE_CHECKING:
    from collections.abc import Callable, Iterator
    from pathlib import Path

    from trsat.graph.bipartite import GraphArtifacts
    from trsat.nn.model import TrsatModel

# (v1 | v2 | -v4) & (-v1 | v2 | -v3) & (v3 | v4)
EXAMPLE_CLAUSES = [[1, 2, -4], [-1, 2, -3], [3, 4]]

RUN_SLOW = os.environ.get("TRSAT_RUN_SLOW") == "1"


@pytest.fixture
def skip_unless_slow() -> None:
    """Skip training-scale suites unless TRSAT_RUN_SLOW=1."""
    if not RUN_SLOW:
        pytest.skip("set TRSAT_RUN_SLOW=1 to run slow suites")


@pytest.fixture
def skip_if_no_solver() -> None:
    """Skip test if no external SAT solver binary is available."""
    try:
        _ = config.external_solver_path
    except Exception:
        pytest.skip("External SAT solver not available")


@pytest.fixture
def example_formula() -> CnfFormula:
    """Four variables, three clauses; the running example of the docs."""
    return CnfFormula.from_ints(4, EXAMPLE_CLAUSES)


@pytest.fixture
def example_artifacts(example_formula: CnfFormula) -> GraphArtifacts:
    return build_graph_artifacts(example_formula)


@pytest.fixture
def example_cnf(tmp_path: Path, example_formula: CnfFormula) -> Path:
    """The running example written as a DIMACS file."""
    path = tmp_path / "example.cnf"
    write_dimacs_file(path, example_formula, comments=["running example"])
    return path


@pytest.fixture
def tiny_config() -> ModelConfig:
    """Small architecture that keeps forward passes and grad checks fast."""
    return ModelConfig(
        num_encoder_layers=1,
        num_decoder_layers=1,
        channels=8,
        heads=2,
        ffn_hidden=16,
        init_seed=3,
    )


@pytest.fixture
def tiny_model(tiny_config: ModelConfig) -> TrsatModel:
    model = init_model(tiny_config)
    model.eval()
    return model


# Below this magnitude a central difference at h=1e-6 is dominated by rounding of
# the loss (about 1e-9 absolute), so those coordinates get an absolute bound instead.
NEAR_ZERO_GRADIENT = 1e-3
NEAR_ZERO_ABS_TOL = 1e-8


def _compare_gradients(loss: Callable[[], torch.Tensor], params: list[torch.Tensor]) -> int:
    analytic = autograd_gradients(loss, params)
    numeric = finite_difference_gradients(loss, params, h=1e-6)
    large_count = 0
    for a_full, n_full in zip(analytic, numeric):
        a, n = a_full.reshape(-1), n_full.reshape(-1)
        scale = torch.maximum(a.abs(), n.abs())
        large = scale >= NEAR_ZERO_GRADIENT
        error = (a - n).abs()
        if bool(large.any()):
            relative = error[large] / scale[large].clamp(min=1e-8)
            assert float(relative.max()) <= 1e-5
        if bool((~large).any()):
            assert float(error[~large].max()) <= NEAR_ZERO_ABS_TOL
        large_count += int(large.sum())
    return large_count


@pytest.fixture
def check_gradients() -> Callable[[Callable[[], torch.Tensor], list[torch.Tensor]], int]:
    """Autograd against central differences; returns how many coordinates were large."""
    return _compare_gradients


@pytest.fixture(autouse=True)
def _reset_global_config() -> Iterator[None]:
    """Undo changes tests make to the global configuration object."""
    saved = (config._solver_path, config._verbose, config._timeout, config._oracle_cap)
    yield
    config._solver_path, config._verbose, config._timeout, config._oracle_cap = saved
