"""Adam with the Transformer hyperparameters and the Noam learning-rate schedule."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Final

import torch

from trsat.exceptions import TrainingError

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

logger = logging.getLogger(__name__)

BETAS: Final = (0.9, 0.98)
EPSILON: Final = 1e-9


def noam_lr(step: int, d: int, warmup: int) -> float:
    """``d^-0.5 * min(step^-0.5, step * warmup^-1.5)``; peaks at ``step == warmup``.

    Raises:
        TrainingError: If ``step``, ``d`` or ``warmup`` is below 1
    """
    if step < 1 or d < 1 or warmup < 1:
        raise TrainingError(f"noam_lr needs step, d, warmup >= 1, got {step}, {d}, {warmup}")
    return float(d**-0.5 * min(step**-0.5, step * warmup**-1.5))


class AdamState:
    """Bias-corrected Adam moments for a fixed set of named parameters."""

    def __init__(self, named_parameters: Iterable[tuple[str, torch.nn.Parameter]]) -> None:
        self.parameters = dict(named_parameters)
        if not self.parameters:
            raise TrainingError("Adam needs at least one parameter")
        self.optimizer = torch.optim.Adam(
            list(self.parameters.values()), lr=0.0, betas=BETAS, eps=EPSILON, foreach=False
        )
        self.step = 0

    def first_moment(self, name: str) -> torch.Tensor:
        return self._moment(name, "exp_avg")

    def second_moment(self, name: str) -> torch.Tensor:
        return self._moment(name, "exp_avg_sq")

    def _moment(self, name: str, key: str) -> torch.Tensor:
        state = self.optimizer.state.get(self.parameters[name], {})
        if key not in state:
            return torch.zeros_like(self.parameters[name])
        moment: torch.Tensor = state[key]
        return moment

    def zero_grad(self) -> None:
        self.optimizer.zero_grad(set_to_none=False)


def adam_step(
    state: AdamState, lr: float, grads: Mapping[str, torch.Tensor] | None = None
) -> None:
    """Apply one Adam update at learning rate ``lr``.

    Args:
        state: Optimizer state
        lr: Learning rate for this step
        grads: Gradients by parameter name; defaults to each parameter's ``.grad``
            (missing gradients count as zero)

    Raises:
        TrainingError: If a gradient is non-finite or misshapen
    """
    for name, p in state.parameters.items():
        g = grads.get(name) if grads is not None else p.grad
        if g is None:
            g = torch.zeros_like(p)
        if g.shape != p.shape:
            raise TrainingError(
                f"Gradient shape {tuple(g.shape)} does not match {tuple(p.shape)}", parameter=name
            )
        if not bool(torch.isfinite(g).all()):
            raise TrainingError("Non-finite gradient", parameter=name)
        if g is not p.grad:
            p.grad = g.detach().clone()

    for group in state.optimizer.param_groups:
        group["lr"] = lr
    state.optimizer.step()
    state.step += 1
    logger.debug(f"Adam step {state.step} at lr={lr:.3e}")
