"""Self-supervised training loop and completion-rate evaluation."""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
import torch

from trsat.cnf.dimacs import read_dimacs
from trsat.cnf.formula import count_satisfied
from trsat.exceptions import ConfigurationError, TrainingError, TrsatError
from trsat.graph.bipartite import build_graph_artifacts
from trsat.nn.autodiff import ComputationRecord, backward
from trsat.nn.checkpoint import save_checkpoint
from trsat.nn.loss import neg_log_loss
from trsat.nn.model import ModelConfig, TrsatModel, init_model, threshold
from trsat.training.optim import AdamState, adam_step, noam_lr

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from trsat.cnf.formula import CnfFormula
    from trsat.graph.bipartite import GraphArtifacts

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ("epoch", "loss", "train_rate", "val_rate", "lr")


@dataclass(frozen=True)
class TrainConfig:
    """Training schedule and bookkeeping.

    ``schedule_dim`` defaults to the model's channel count. Instance ``i`` of the
    dataset always draws its noise from ``instance_seed_base + i``.
    """

    epochs: int = 500
    warmup_steps: int = 400
    schedule_dim: int | None = None
    shuffle_seed: int = 0
    checkpoint_every: int = 0
    checkpoint_dir: Path | None = None
    validation_fraction: float = 0.2
    lr_factor: float = 1.0
    instance_seed_base: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be >= 1, got {self.epochs}")
        if self.warmup_steps < 1:
            raise ConfigurationError(f"warmup_steps must be >= 1, got {self.warmup_steps}")
        if self.schedule_dim is not None and self.schedule_dim < 1:
            raise ConfigurationError(f"schedule_dim must be >= 1, got {self.schedule_dim}")
        if self.checkpoint_every < 0:
            raise ConfigurationError(f"checkpoint_every must be >= 0, got {self.checkpoint_every}")
        if self.checkpoint_every and self.checkpoint_dir is None:
            raise ConfigurationError("checkpoint_every needs checkpoint_dir")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise ConfigurationError(
                f"validation_fraction must be in [0, 1), got {self.validation_fraction}"
            )
        if not (self.lr_factor > 0 and math.isfinite(self.lr_factor)):
            raise ConfigurationError(f"lr_factor must be positive, got {self.lr_factor}")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    loss: float
    train_rate: float
    val_rate: float | None
    lr: float


@dataclass
class TrainHistory:
    records: list[EpochRecord] = field(default_factory=list)

    def append(self, record: EpochRecord) -> None:
        self.records.append(record)

    def to_csv(self) -> str:
        """Comma-separated history with a header row; missing validation rates are blank."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(HISTORY_COLUMNS)
        for r in self.records:
            val = "" if r.val_rate is None else repr(r.val_rate)
            writer.writerow([r.epoch, repr(r.loss), repr(r.train_rate), val, repr(r.lr)])
        return buffer.getvalue()

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class EvaluationSummary:
    """Mean and population standard deviation of per-instance completion rates."""

    mean: float
    std: float
    rates: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.rates)

    def format_line(self, name: str) -> str:
        return f"{name} {self.mean:.4f}±{self.std:.4f} {self.n}"


def load_dataset(directory: Path) -> list[tuple[str, CnfFormula]]:
    """Every ``*.cnf`` file of a directory, sorted by name.

    Raises:
        TrainingError: If the directory holds no DIMACS files
    """
    paths = sorted(directory.glob("*.cnf"))
    if not paths:
        raise TrainingError(f"No .cnf files in {directory}")
    return [(p.name, read_dimacs(p)) for p in paths]


def split_dataset(size: int, fraction: float, seed: int) -> tuple[list[int], list[int]]:
    """Seeded train/validation split of indices ``0..size-1``.

    The validation part holds ``floor(size * fraction)`` indices and the training
    part keeps at least one.
    """
    order = np.random.default_rng(seed).permutation(size)
    n_val = min(int(size * fraction), size - 1)
    return sorted(order[n_val:].tolist()), sorted(order[:n_val].tolist())


def _rate(
    model: TrsatModel, f: CnfFormula, artifacts: GraphArtifacts, instance_seed: int
) -> float:
    out = model(f, artifacts.biadjacency, artifacts.meta_paths, instance_seed)
    assignment = threshold(out, model.config.epsilon_threshold)
    return count_satisfied(f, assignment).completion_rate


def evaluate(
    model: TrsatModel,
    dataset: Sequence[CnfFormula],
    instance_seed_base: int = 0,
    artifacts: Sequence[GraphArtifacts] | None = None,
    workers: int = 1,
    instance_seeds: Sequence[int] | None = None,
) -> EvaluationSummary:
    """Completion rate of the thresholded outputs over a dataset.

    Instance ``i`` uses noise seed ``instance_seeds[i]`` (default
    ``instance_seed_base + i``). Instances may be evaluated on several threads;
    rates are reduced in dataset order.

    Raises:
        TrainingError: If the dataset is empty
    """
    if not dataset:
        raise TrainingError("Cannot evaluate an empty dataset")
    graphs = list(artifacts) if artifacts is not None else [build_graph_artifacts(f) for f in dataset]
    seeds = (
        list(instance_seeds)
        if instance_seeds is not None
        else [instance_seed_base + i for i in range(len(dataset))]
    )

    def job(i: int) -> float:
        with torch.no_grad():
            return _rate(model, dataset[i], graphs[i], seeds[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rates = list(pool.map(job, range(len(dataset))))
    else:
        rates = [job(i) for i in range(len(dataset))]
    arr = np.asarray(rates, dtype=np.float64)
    return EvaluationSummary(mean=float(arr.mean()), std=float(arr.std()), rates=tuple(rates))


def train(
    dataset: Sequence[CnfFormula],
    cfg: TrainConfig,
    model_cfg: ModelConfig,
    validation: Sequence[CnfFormula] | None = None,
) -> tuple[TrsatModel, TrainHistory]:
    """Train a fresh model on ``dataset`` with one Adam step per instance.

    Without an explicit ``validation`` set, a seeded ``validation_fraction`` of the
    dataset is held out.

    Raises:
        TrainingError: Empty dataset, non-finite loss or gradient
        CheckpointError: If a periodic checkpoint cannot be written
    """
    if not dataset:
        raise TrainingError("Training dataset is empty")

    formulas = list(dataset)
    seeds = [cfg.instance_seed_base + i for i in range(len(formulas))]
    if validation is None:
        train_idx, val_idx = split_dataset(len(formulas), cfg.validation_fraction, cfg.shuffle_seed)
        val_formulas = [formulas[i] for i in val_idx]
        val_seeds = [seeds[i] for i in val_idx]
    else:
        train_idx = list(range(len(formulas)))
        val_formulas = list(validation)
        val_seeds = [cfg.instance_seed_base + len(formulas) + i for i in range(len(val_formulas))]

    artifacts = [build_graph_artifacts(f) for f in formulas]
    val_artifacts = [build_graph_artifacts(f) for f in val_formulas]

    model = init_model(model_cfg)
    state = AdamState(model.named_parameters())
    schedule_dim = cfg.schedule_dim or model_cfg.channels
    rng = np.random.default_rng(cfg.shuffle_seed)
    history = TrainHistory()
    if cfg.checkpoint_dir is not None and cfg.checkpoint_every:
        cfg.checkpoint_dir.mkdir(parents=True, exist_ok=True)

    logger.info(
        f"Training on {len(train_idx)} instances ({len(val_formulas)} held out) "
        f"for {cfg.epochs} epochs"
    )
    lr = 0.0
    for epoch in range(1, cfg.epochs + 1):
        model.train()
        losses = []
        for i in rng.permutation(train_idx).tolist():
            lr = cfg.lr_factor * noam_lr(state.step + 1, schedule_dim, cfg.warmup_steps)
            state.zero_grad()
            record = ComputationRecord()
            f, art = formulas[i], artifacts[i]
            out = model(f, art.biadjacency, art.meta_paths, seeds[i], record=record)
            try:
                loss = neg_log_loss(out, f, model_cfg.tau)
                record.finish(loss)
                backward(record)
                adam_step(state, lr)
            except TrainingError as e:
                raise TrainingError(e.message, epoch=epoch, instance=i, parameter=e.parameter) from e
            except TrsatError as e:
                raise TrainingError(str(e), epoch=epoch, instance=i) from e
            losses.append(float(loss.detach()))

        model.eval()
        train_rate = evaluate(
            model,
            [formulas[i] for i in train_idx],
            artifacts=[artifacts[i] for i in train_idx],
            instance_seeds=[seeds[i] for i in train_idx],
        ).mean
        val_rate = (
            evaluate(model, val_formulas, artifacts=val_artifacts, instance_seeds=val_seeds).mean
            if val_formulas
            else None
        )
        entry = EpochRecord(epoch, float(np.mean(losses)), train_rate, val_rate, lr)
        history.append(entry)
        logger.info(
            f"epoch {epoch}: loss={entry.loss:.4f} train_rate={train_rate:.4f} "
            f"val_rate={'-' if val_rate is None else f'{val_rate:.4f}'} lr={lr:.3e}"
        )

        if cfg.checkpoint_every and epoch % cfg.checkpoint_every == 0 and cfg.checkpoint_dir:
            save_checkpoint(model, cfg.checkpoint_dir / f"epoch-{epoch:04d}.trsat")

    return model, history
