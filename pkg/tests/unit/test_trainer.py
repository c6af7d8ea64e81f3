"""Unit tests for the training loop, dataset handling and evaluation."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest
import torch

from trsat.cnf.dimacs import write_dimacs_file
from trsat.cnf.formula import CnfFormula
from trsat.exceptions import ConfigurationError, TrainingError
from trsat.generators.random_sat import gen_random_3sat
from trsat.nn.model import ModelConfig, init_model
from trsat.training.trainer import (
    EpochRecord,
    EvaluationSummary,
    TrainConfig,
    TrainHistory,
    evaluate,
    load_dataset,
    split_dataset,
    train,
)

if TYPE_CHECKING:
    from pathlib import Path

    from trsat.nn.model import TrsatModel


@pytest.fixture
def small_dataset() -> list[CnfFormula]:
    return [gen_random_3sat(8, 34, seed) for seed in range(3)]


class TestTrainConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"epochs": 0},
            {"warmup_steps": 0},
            {"checkpoint_every": 2},
            {"validation_fraction": 1.0},
            {"lr_factor": 0.0},
            {"schedule_dim": 0},
        ],
    )
    def test_invalid(self, kwargs: dict[str, float]) -> None:
        with pytest.raises(ConfigurationError):
            TrainConfig(**kwargs)  # type: ignore[arg-type]


class TestSplit:
    def test_sizes_and_disjointness(self) -> None:
        train_idx, val_idx = split_dataset(10, 0.2, seed=0)
        assert len(train_idx) == 8
        assert len(val_idx) == 2
        assert sorted(train_idx + val_idx) == list(range(10))

    def test_seeded(self) -> None:
        assert split_dataset(20, 0.25, 3) == split_dataset(20, 0.25, 3)

    def test_keeps_one_training_instance(self) -> None:
        assert split_dataset(2, 0.9, 0)[0] != []
        assert split_dataset(1, 0.5, 0) == ([0], [])

    def test_no_validation(self) -> None:
        assert split_dataset(4, 0.0, 1) == ([0, 1, 2, 3], [])


class TestHistoryAndSummary:
    def test_csv(self) -> None:
        history = TrainHistory()
        history.append(EpochRecord(1, 2.5, 0.75, None, 0.001))
        history.append(EpochRecord(2, 2.0, 0.8, 0.5, 0.002))
        lines = history.to_csv().splitlines()
        assert lines[0] == "epoch,loss,train_rate,val_rate,lr"
        assert lines[1] == "1,2.5,0.75,,0.001"
        assert lines[2] == "2,2.0,0.8,0.5,0.002"
        assert len(history) == 2

    def test_format_line(self) -> None:
        summary = EvaluationSummary(mean=0.5, std=0.1, rates=(0.4, 0.6))
        assert summary.format_line("rand3") == "rand3 0.5000±0.1000 2"


class TestDataset:
    def test_load_sorted(self, tmp_path: Path, small_dataset: list[CnfFormula]) -> None:
        for name, f in zip(["b.cnf", "a.cnf", "c.cnf"], small_dataset):
            write_dimacs_file(tmp_path / name, f)
        (tmp_path / "notes.txt").write_text("ignored", encoding="utf-8")
        loaded = load_dataset(tmp_path)
        assert [name for name, _ in loaded] == ["a.cnf", "b.cnf", "c.cnf"]
        assert loaded[1][1] == small_dataset[0]

    def test_empty_directory(self, tmp_path: Path) -> None:
        with pytest.raises(TrainingError, match="No .cnf files"):
            load_dataset(tmp_path)


class TestEvaluate:
    def test_summary_statistics(self, tiny_model: TrsatModel, small_dataset: list[CnfFormula]) -> None:
        summary = evaluate(tiny_model, small_dataset, instance_seed_base=4)
        assert summary.n == 3
        assert all(0.0 <= r <= 1.0 for r in summary.rates)
        assert summary.mean == pytest.approx(float(np.mean(summary.rates)))
        assert summary.std == pytest.approx(float(np.std(summary.rates)))

    def test_workers_do_not_change_result(self, tiny_model: TrsatModel, small_dataset: list[CnfFormula]) -> None:
        assert evaluate(tiny_model, small_dataset, workers=3) == evaluate(tiny_model, small_dataset)

    def test_explicit_seeds(self, tiny_model: TrsatModel, small_dataset: list[CnfFormula]) -> None:
        by_base = evaluate(tiny_model, small_dataset, instance_seed_base=10)
        by_list = evaluate(tiny_model, small_dataset, instance_seeds=[10, 11, 12])
        assert by_base == by_list

    def test_empty(self, tiny_model: TrsatModel) -> None:
        with pytest.raises(TrainingError):
            evaluate(tiny_model, [])

    def test_untrained_model_on_uniform_random_3sat(self) -> None:
        # uf20-91 shaped instances; random-looking outputs already satisfy most 3-clauses
        dataset = [gen_random_3sat(20, 91, seed) for seed in range(10)]
        summary = evaluate(init_model(ModelConfig()), dataset)
        assert summary.mean > 0.5


class TestTrain:
    def test_short_run(self, small_dataset: list[CnfFormula], tiny_config: ModelConfig) -> None:
        cfg = TrainConfig(epochs=2, warmup_steps=4, validation_fraction=0.34)
        model, history = train(small_dataset, cfg, tiny_config)
        assert len(history) == 2
        assert [r.epoch for r in history.records] == [1, 2]
        assert all(r.val_rate is not None for r in history.records)
        assert all(np.isfinite(r.loss) for r in history.records)
        assert model.config == tiny_config
        # two training instances per epoch, four Adam steps in total
        assert history.records[-1].lr == pytest.approx(4 * 4**-1.5 / np.sqrt(tiny_config.channels))

    def test_deterministic(self, small_dataset: list[CnfFormula], tiny_config: ModelConfig) -> None:
        cfg = TrainConfig(epochs=1, warmup_steps=4, validation_fraction=0.0)
        first, h1 = train(small_dataset, cfg, tiny_config)
        second, h2 = train(small_dataset, cfg, tiny_config)
        assert h1.to_csv() == h2.to_csv()
        for (name, p), (_, q) in zip(first.named_parameters(), second.named_parameters()):
            assert torch.equal(p, q), name

    def test_parameters_change(self, small_dataset: list[CnfFormula], tiny_config: ModelConfig) -> None:
        model, _ = train(small_dataset, TrainConfig(epochs=1, validation_fraction=0.0), tiny_config)
        assert not torch.equal(model.readout.weight, init_model(tiny_config).readout.weight)

    def test_without_validation_csv_is_blank(self, small_dataset: list[CnfFormula], tiny_config: ModelConfig) -> None:
        _, history = train(small_dataset, TrainConfig(epochs=1, validation_fraction=0.0), tiny_config)
        assert history.records[0].val_rate is None
        assert history.to_csv().splitlines()[1].split(",")[3] == ""

    def test_explicit_validation(self, small_dataset: list[CnfFormula], tiny_config: ModelConfig) -> None:
        cfg = TrainConfig(epochs=1, validation_fraction=0.0)
        _, history = train(small_dataset[:2], cfg, tiny_config, validation=small_dataset[2:])
        assert history.records[0].val_rate is not None

    def test_periodic_checkpoints(
        self, tmp_path: Path, small_dataset: list[CnfFormula], tiny_config: ModelConfig
    ) -> None:
        cfg = TrainConfig(epochs=2, checkpoint_every=1, checkpoint_dir=tmp_path / "ckpt")
        train(small_dataset, cfg, tiny_config)
        assert sorted(p.name for p in (tmp_path / "ckpt").iterdir()) == [
            "epoch-0001.trsat",
            "epoch-0002.trsat",
        ]

    def test_empty_dataset(self, tiny_config: ModelConfig) -> None:
        with pytest.raises(TrainingError, match="empty"):
            train([], TrainConfig(epochs=1), tiny_config)

    def test_unit_clause_loss_falls_after_warmup(self, tiny_config: ModelConfig) -> None:
        # one instance, so each epoch is one step and records the loss before its update
        f = CnfFormula.from_ints(1, [[1]])
        warmup = 10
        _, history = train([f], TrainConfig(epochs=50, warmup_steps=warmup, validation_fraction=0.0), tiny_config)
        losses = [r.loss for r in history.records][warmup:]
        steps = list(zip(losses, losses[1:]))
        non_increasing = sum(later <= earlier for earlier, later in steps)
        assert non_increasing >= 0.9 * len(steps)
