"""Training and evaluation over DIMACS dataset directories."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from trsat.nn.checkpoint import load_checkpoint, save_checkpoint
from trsat.training.trainer import evaluate, load_dataset, train

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from trsat.nn.model import ModelConfig, TrsatModel
    from trsat.training.trainer import TrainConfig, TrainHistory

logger = logging.getLogger(__name__)


def train_model(
    data_dir: Path,
    checkpoint_path: Path,
    train_cfg: TrainConfig,
    model_cfg: ModelConfig,
    history_path: Path | None = None,
) -> tuple[TrsatModel, TrainHistory]:
    """Train on every ``*.cnf`` in ``data_dir``; write the checkpoint and optional CSV history.

    Raises:
        TrainingError: If the directory holds no DIMACS files or training diverges
        DimacsError: If a dataset file is malformed
    """
    formulas = [f for _, f in load_dataset(data_dir)]
    model, history = train(formulas, train_cfg, model_cfg)
    checkpoint_path.parent.mkdir(parents=True, exist_ok=True)
    save_checkpoint(model, checkpoint_path)
    if history_path is not None:
        history_path.parent.mkdir(parents=True, exist_ok=True)
        history_path.write_text(history.to_csv(), encoding="utf-8")
        logger.info(f"Wrote training history {history_path}")
    return model, history


def evaluate_datasets(
    checkpoint_path: Path,
    data_dirs: Sequence[Path],
    seed: int = 0,
    workers: int = 1,
) -> list[str]:
    """One ``name mean±std n`` line per dataset directory."""
    model = load_checkpoint(checkpoint_path)
    model.eval()
    lines = []
    for directory in data_dirs:
        formulas = [f for _, f in load_dataset(directory)]
        summary = evaluate(model, formulas, instance_seed_base=seed, workers=workers)
        lines.append(summary.format_line(directory.name))
    return lines
