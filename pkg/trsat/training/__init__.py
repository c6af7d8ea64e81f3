"""Optimizer, learning-rate schedule and training loop."""

from __future__ import annotations

from trsat.training.optim import AdamState, adam_step, noam_lr
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

__all__ = [
    "AdamState",
    "EpochRecord",
    "EvaluationSummary",
    "TrainConfig",
    "TrainHistory",
    "adam_step",
    "evaluate",
    "load_dataset",
    "noam_lr",
    "split_dataset",
    "train",
]
