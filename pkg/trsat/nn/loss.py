"""Differentiable satisfaction objective.

A literal's soft value is ``l(x, e) = (1 - e)/2 + e*x``. A clause scores the smoothmax
``S_tau`` of its literal values, the formula scores the product of its clause scores,
and the training loss is ``-sum_j log S_tau(clause j)``.
"""

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, overload

import torch

from trsat.cnf.formula import Polarity
from trsat.exceptions import AutodiffError, ModelConfigError, ShapeError
from trsat.nn.autodiff import DTYPE
from trsat.nn.model import VariableOutputs

if TYPE_CHECKING:
    from collections.abc import Sequence

    from trsat.cnf.formula import CnfFormula

logger = logging.getLogger(__name__)

EdgePolarity = Polarity
SCORE_FLOOR = 1e-12


@overload
def literal_value(x: float, e: int) -> float: ...
@overload
def literal_value(x: torch.Tensor, e: int | torch.Tensor) -> torch.Tensor: ...
def literal_value(x: float | torch.Tensor, e: int | torch.Tensor) -> float | torch.Tensor:
    """``x`` for a positive occurrence, ``1 - x`` for a negative one."""
    return (1 - e) / 2 + e * x


def _check_tau(tau: float) -> None:
    if not (tau > 0 and math.isfinite(tau)):
        raise ModelConfigError(f"Smoothmax temperature must be positive, got {tau}")


def _as_tensor(x: VariableOutputs | torch.Tensor | Sequence[float]) -> torch.Tensor:
    if isinstance(x, VariableOutputs):
        return x.x
    if isinstance(x, torch.Tensor):
        return x
    return torch.as_tensor(x, dtype=DTYPE)


def smoothmax(values: torch.Tensor | Sequence[float], tau: float) -> torch.Tensor:
    """``sum v e^(tau v) / sum e^(tau v)``, evaluated as ``max + weighted mean offset``.

    Raises:
        ShapeError: If ``values`` is empty
        ModelConfigError: If ``tau`` is not positive
    """
    _check_tau(tau)
    v = _as_tensor(values).reshape(-1)
    if v.numel() == 0:
        raise ShapeError("Smoothmax of an empty list")
    peak = v.detach().max()
    offset = v - peak
    weights = torch.exp(tau * offset)
    return peak + (weights * offset).sum() / weights.sum()


def clause_scores(
    x: VariableOutputs | torch.Tensor | Sequence[float], f: CnfFormula, tau: float
) -> torch.Tensor:
    """Smoothmax of each clause's literal values, shape ``(m,)``."""
    _check_tau(tau)
    xs = _as_tensor(x)
    if xs.shape != (f.num_variables,):
        raise ShapeError(f"Expected {f.num_variables} soft values, got shape {tuple(xs.shape)}")
    edges = f.edges
    variables = torch.from_numpy(edges.variables)
    clauses = torch.from_numpy(edges.clauses)
    signs = torch.from_numpy(edges.signs).to(xs.dtype)

    lits = literal_value(xs[variables], signs)
    peak = torch.full((f.num_clauses,), -math.inf, dtype=xs.dtype).scatter_reduce(
        0, clauses, lits.detach(), reduce="amax", include_self=True
    )
    offset = lits - peak[clauses]
    weights = torch.exp(tau * offset)
    numerator = torch.zeros(f.num_clauses, dtype=xs.dtype).index_add(0, clauses, weights * offset)
    denominator = torch.zeros(f.num_clauses, dtype=xs.dtype).index_add(0, clauses, weights)
    return peak + numerator / denominator


def phi_approx(
    x: VariableOutputs | torch.Tensor | Sequence[float], f: CnfFormula, tau: float
) -> torch.Tensor:
    """Product of clause scores: the soft truth value of the whole formula."""
    return torch.prod(clause_scores(x, f, tau))


def neg_log_loss(
    x: VariableOutputs | torch.Tensor | Sequence[float], f: CnfFormula, tau: float
) -> torch.Tensor:
    """``-sum_j log S_tau(clause j)`` with scores clamped at 1e-12.

    Raises:
        AutodiffError: If the loss is not finite
    """
    scores = clause_scores(x, f, tau)
    loss = -torch.log(torch.clamp(scores, min=SCORE_FLOOR)).sum()
    if not bool(torch.isfinite(loss.detach())):
        raise AutodiffError(f"Non-finite loss on {f!r}")
    return loss
