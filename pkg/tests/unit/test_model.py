"""Unit tests for the encoder/decoder model, its configuration and thresholding."""

from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING

import pytest
import torch

from trsat.cnf.formula import CnfFormula
from trsat.exceptions import ModelConfigError, ShapeError
from trsat.graph.bipartite import build_graph_artifacts
from trsat.nn.autodiff import ComputationRecord
from trsat.nn.loss import neg_log_loss
from trsat.nn.model import (
    ModelConfig,
    TrsatModel,
    VariableOutputs,
    forward,
    init_model,
    initial_embeddings,
    instance_noise,
    threshold,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from trsat.graph.bipartite import GraphArtifacts

    GradientCheck = Callable[[Callable[[], torch.Tensor], list[torch.Tensor]], int]


def _run(model: TrsatModel, f: CnfFormula, seed: int = 0, **kwargs: object) -> VariableOutputs:
    artifacts = build_graph_artifacts(f)
    return model(f, artifacts.biadjacency, artifacts.meta_paths, seed, **kwargs)  # type: ignore[no-any-return]


class TestModelConfig:
    def test_defaults(self) -> None:
        cfg = ModelConfig()
        assert (cfg.num_encoder_layers, cfg.num_decoder_layers, cfg.channels) == (4, 4, 64)
        assert (cfg.heads, cfg.ffn_hidden, cfg.tau, cfg.epsilon_threshold) == (4, 256, 5.0, 0.01)

    @pytest.mark.parametrize(
        "changes",
        [
            {"channels": 8, "heads": 3},
            {"num_encoder_layers": 0},
            {"tau": 0.0},
            {"epsilon_threshold": 0.5},
            {"noise_scale": -1.0},
        ],
    )
    def test_invalid(self, changes: dict[str, float]) -> None:
        with pytest.raises(ModelConfigError):
            dataclasses.replace(ModelConfig(), **changes)


class TestModel:
    def test_default_parameter_count(self) -> None:
        assert init_model().num_parameters() == 1_068_801

    def test_seeded_initialisation(self, tiny_config: ModelConfig) -> None:
        a, b = init_model(tiny_config), init_model(tiny_config)
        for (name, p), (_, q) in zip(a.named_parameters(), b.named_parameters()):
            assert torch.equal(p, q), name
        other = init_model(dataclasses.replace(tiny_config, init_seed=4))
        assert not torch.equal(a.readout.weight, other.readout.weight)

    def test_outputs_in_unit_interval(self, tiny_model: TrsatModel, example_formula: CnfFormula) -> None:
        out = _run(tiny_model, example_formula)
        assert len(out) == 4
        assert bool(((out.x > 0) & (out.x < 1)).all())

    def test_deterministic_per_instance_seed(self, tiny_model: TrsatModel, example_formula: CnfFormula) -> None:
        first = _run(tiny_model, example_formula, seed=5)
        again = _run(tiny_model, example_formula, seed=5)
        assert torch.equal(first.x, again.x)
        assert not torch.equal(first.x, _run(tiny_model, example_formula, seed=6).x)

    def test_forward_helper(self, tiny_model: TrsatModel, example_formula: CnfFormula, example_artifacts: GraphArtifacts) -> None:
        out = forward(tiny_model, example_formula, example_artifacts.biadjacency, example_artifacts.meta_paths, 0)
        assert torch.equal(out.x, _run(tiny_model, example_formula).x)

    def test_record_counts_layers(self, tiny_model: TrsatModel, example_formula: CnfFormula) -> None:
        record = ComputationRecord()
        _run(tiny_model, example_formula, record=record)
        assert record.labels("encoder_layer") == ["encoder0"]
        assert record.labels("decoder_layer") == ["decoder0"]
        # four meta-path relations per node kind, two incidence relations per decoder step
        assert record.count("sparse_attention") == 2 * 4 + 2 * 2

    def test_mismatched_graph(self, tiny_model: TrsatModel, example_formula: CnfFormula) -> None:
        other = build_graph_artifacts(CnfFormula.from_ints(2, [[1, 2]]))
        with pytest.raises(ShapeError):
            tiny_model(example_formula, other.biadjacency, other.meta_paths, 0)

    def test_permutation_equivariance(self, tiny_config: ModelConfig, example_formula: CnfFormula) -> None:
        model = init_model(tiny_config)
        f = example_formula
        perm = {1: 3, 2: 1, 3: 4, 4: 2}
        g = CnfFormula.from_ints(4, [[perm[abs(lit)] * (1 if lit > 0 else -1) for lit in c] for c in f.to_ints()])

        var_noise, clause_noise = instance_noise(4, 3, tiny_config.channels, 9)
        permuted = torch.empty_like(var_noise)
        for old, new in perm.items():
            permuted[new - 1] = var_noise[old - 1]

        x_f = _run(model, f, noise=(var_noise, clause_noise)).x
        x_g = _run(model, g, noise=(permuted, clause_noise)).x
        for old, new in perm.items():
            assert x_g[new - 1].item() == pytest.approx(x_f[old - 1].item(), abs=1e-10)

    @pytest.mark.parametrize("order", [[2, 1, 0], [1, 2, 0]])
    def test_clause_order_invariance(self, tiny_config: ModelConfig, example_formula: CnfFormula, order: list[int]) -> None:
        model = init_model(tiny_config)
        f = example_formula
        g = CnfFormula.from_ints(4, [f.to_ints()[j] for j in order])

        var_noise, clause_noise = instance_noise(4, 3, tiny_config.channels, 9)
        x_f = _run(model, f, noise=(var_noise, clause_noise)).x
        x_g = _run(model, g, noise=(var_noise, clause_noise[order])).x
        assert torch.allclose(x_g, x_f, rtol=0.0, atol=1e-10)


class TestInitialEmbeddings:
    def test_zero_noise_gives_type_embeddings(self, tiny_config: ModelConfig, example_formula: CnfFormula, example_artifacts: GraphArtifacts) -> None:
        model = init_model(dataclasses.replace(tiny_config, noise_scale=0.0))
        hv, hc = initial_embeddings(example_formula, example_artifacts.biadjacency, model, instance_seed=1)
        assert torch.equal(hv, model.var_type_embedding.expand(4, -1))
        assert torch.equal(hc, model.clause_type_embedding.expand(3, -1))

    def test_noise_shape_checked(self, tiny_model: TrsatModel, example_formula: CnfFormula, example_artifacts: GraphArtifacts) -> None:
        bad = instance_noise(3, 3, tiny_model.config.channels, 0)
        with pytest.raises(ShapeError):
            initial_embeddings(example_formula, example_artifacts.biadjacency, tiny_model, 0, noise=bad)


class TestThreshold:
    @pytest.mark.parametrize(("x", "bit"), [(0.9, True), (0.2, False), (1.0, True), (0.5, False), (0.0, False)])
    def test_values(self, x: float, bit: bool) -> None:
        assert threshold([x], eps=0.01).values == (bit,)

    def test_variable_outputs(self) -> None:
        out = VariableOutputs(torch.tensor([0.1, 0.7], dtype=torch.float64))
        assert threshold(out, 0.01).to_literals() == [-1, 2]

    @pytest.mark.parametrize("eps", [0.0, 0.5, -0.1])
    def test_bad_eps(self, eps: float) -> None:
        with pytest.raises(ModelConfigError):
            threshold([0.5], eps)


class TestModelGradients:
    def test_selected_parameters(
        self,
        tiny_model: TrsatModel,
        example_formula: CnfFormula,
        example_artifacts: GraphArtifacts,
        check_gradients: GradientCheck,
    ) -> None:
        def loss() -> torch.Tensor:
            out = tiny_model(example_formula, example_artifacts.biadjacency, example_artifacts.meta_paths, 0)
            return neg_log_loss(out, example_formula, tiny_model.config.tau)

        named = dict(tiny_model.named_parameters())
        params = [
            named["readout.weight"],
            named["var_type_embedding"],
            named["decoders.0.var_ffn.inner.bias"],
            named["encoders.0.variables.relations.1.query.weight"],
        ]
        assert check_gradients(loss, params) > 0
