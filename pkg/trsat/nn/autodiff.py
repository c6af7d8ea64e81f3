"""Numeric primitives of the model with reverse-mode gradients.

Dense values are float64 ``torch.Tensor`` objects and learnable values are
``torch.nn.Parameter``. Each primitive can log itself into a
:class:`ComputationRecord`; :func:`backward` replays the record's loss exactly once.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import torch
import torch.nn.functional as F  # noqa: N812

from trsat.exceptions import AutodiffError, ShapeError

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from trsat.graph.sparse import SparseMatrix

logger = logging.getLogger(__name__)

DTYPE = torch.float64
LAYER_NORM_EPS = 1e-5

DenseMatrix = torch.Tensor
Parameter = torch.nn.Parameter


@dataclass(frozen=True)
class RecordEntry:
    op: str
    label: str
    shape: tuple[int, ...]


@dataclass
class ComputationRecord:
    """Ordered log of executed primitives plus the scalar loss they feed."""

    entries: list[RecordEntry] = field(default_factory=list)
    loss: torch.Tensor | None = None
    consumed: bool = False

    def log(self, op: str, label: str, out: torch.Tensor) -> None:
        self.entries.append(RecordEntry(op, label, tuple(out.shape)))

    def finish(self, loss: torch.Tensor) -> None:
        """Attach the scalar the backward pass starts from."""
        if loss.numel() != 1:
            raise AutodiffError(f"Loss must be a scalar, got shape {tuple(loss.shape)}")
        self.loss = loss

    def count(self, op: str) -> int:
        return sum(1 for e in self.entries if e.op == op)

    def labels(self, op: str) -> list[str]:
        return [e.label for e in self.entries if e.op == op]


def _log(record: ComputationRecord | None, op: str, label: str, out: torch.Tensor) -> None:
    if record is not None:
        record.log(op, label, out)


def _require_finite(name: str, t: torch.Tensor) -> None:
    if not bool(torch.isfinite(t).all()):
        raise AutodiffError(f"Non-finite values in {name}")


def dense_affine(
    x: torch.Tensor,
    w: torch.Tensor,
    b: torch.Tensor,
    record: ComputationRecord | None = None,
    label: str = "",
) -> torch.Tensor:
    """``x @ w + b`` with ``b`` broadcast over rows.

    Raises:
        ShapeError: If ``x.cols != w.rows`` or ``b`` does not match ``w.cols``
    """
    if x.dim() != 2 or w.dim() != 2 or x.shape[1] != w.shape[0]:
        raise ShapeError(f"Cannot apply {tuple(w.shape)} weight to {tuple(x.shape)} input")
    if b.shape != (w.shape[1],):
        raise ShapeError(f"Bias shape {tuple(b.shape)} does not match {w.shape[1]} outputs")
    out = x @ w + b
    _log(record, "dense_affine", label, out)
    return out


def layer_norm(
    x: torch.Tensor,
    gain: torch.Tensor,
    bias: torch.Tensor,
    record: ComputationRecord | None = None,
    label: str = "",
) -> torch.Tensor:
    """Per-row standardization (biased variance, stabilizer 1e-5), then ``gain * x + bias``."""
    width = x.shape[-1]
    if gain.shape != (width,) or bias.shape != (width,):
        raise ShapeError(
            f"Layer norm over {width} features got gain {tuple(gain.shape)}, bias {tuple(bias.shape)}"
        )
    out = F.layer_norm(x, (width,), gain, bias, LAYER_NORM_EPS)
    _log(record, "layer_norm", label, out)
    return out


def _check_attention_shapes(
    q: torch.Tensor, k: torch.Tensor, v: torch.Tensor, topology: SparseMatrix, heads: int
) -> None:
    if heads < 1:
        raise ShapeError(f"Head count must be >= 1, got {heads}")
    if topology.rows != q.shape[0] or topology.cols != k.shape[0]:
        raise ShapeError(
            f"Topology {topology.rows}x{topology.cols} does not link "
            f"{q.shape[0]} queries to {k.shape[0]} keys"
        )
    if v.shape[0] != k.shape[0]:
        raise ShapeError(f"{k.shape[0]} keys but {v.shape[0]} values")
    if q.shape[1] != k.shape[1]:
        raise ShapeError(f"Query width {q.shape[1]} differs from key width {k.shape[1]}")
    if q.shape[1] % heads or v.shape[1] % heads:
        raise ShapeError(f"Feature widths {q.shape[1]}/{v.shape[1]} not divisible by {heads} heads")


def _edge_index(topology: SparseMatrix) -> tuple[torch.Tensor, torch.Tensor]:
    return torch.from_numpy(topology.row_indices), torch.from_numpy(topology.col_indices)


def attention_coefficients(
    q: torch.Tensor, k: torch.Tensor, topology: SparseMatrix, heads: int
) -> torch.Tensor:
    """Softmax-normalized scores per stored edge and head, shape ``(nnz, heads)``.

    Edges follow the topology's storage order. Scores are scaled by ``1/sqrt(d_head)``
    and shifted by the per-row maximum before exponentiation.
    """
    rows, cols = _edge_index(topology)
    n_q = q.shape[0]
    d_head = q.shape[1] // heads
    qh = q.reshape(n_q, heads, d_head)
    kh = k.reshape(k.shape[0], heads, d_head)

    scores = (qh[rows] * kh[cols]).sum(dim=-1) / math.sqrt(d_head)
    index = rows.unsqueeze(1).expand(-1, heads)
    row_max = torch.full((n_q, heads), -math.inf, dtype=q.dtype).scatter_reduce(
        0, index, scores.detach(), reduce="amax", include_self=True
    )
    weights = torch.exp(scores - row_max[rows])
    denom = torch.zeros((n_q, heads), dtype=q.dtype).index_add(0, rows, weights)
    return weights / denom[rows]


def sparse_attention(
    q: torch.Tensor,
    k: torch.Tensor,
    v: torch.Tensor,
    topology: SparseMatrix,
    heads: int,
    record: ComputationRecord | None = None,
    label: str = "",
) -> torch.Tensor:
    """Multi-head attention restricted to the edges of ``topology``.

    Row i of the output is ``sum_j alpha_ij v_j`` over the stored entries (i, j),
    heads concatenated. Rows without entries produce zeros.

    Raises:
        ShapeError: On inconsistent shapes or head count
        AutodiffError: On non-finite inputs
    """
    _check_attention_shapes(q, k, v, topology, heads)
    for name, t in (("queries", q), ("keys", k), ("values", v)):
        _require_finite(name, t)

    rows, cols = _edge_index(topology)
    n_q = q.shape[0]
    d_value = v.shape[1] // heads
    alpha = attention_coefficients(q, k, topology, heads)
    vh = v.reshape(v.shape[0], heads, d_value)
    messages = alpha.unsqueeze(-1) * vh[cols]
    out = torch.zeros((n_q, heads, d_value), dtype=v.dtype).index_add(0, rows, messages)
    out = out.reshape(n_q, heads * d_value)
    _log(record, "sparse_attention", label, out)
    return out


def backward(rec: ComputationRecord, loss_seed: float = 1.0) -> None:
    """Accumulate gradients of ``loss_seed * rec.loss`` into every leaf parameter.

    Raises:
        AutodiffError: If the record has no loss or was already replayed
    """
    if rec.consumed:
        raise AutodiffError("Computation record was already replayed")
    if rec.loss is None:
        raise AutodiffError("Computation record has no loss; call finish() first")
    _require_finite("loss", rec.loss.detach())
    rec.loss.backward(torch.tensor(loss_seed, dtype=rec.loss.dtype).reshape(rec.loss.shape))
    rec.consumed = True
    logger.debug(f"Backward over {len(rec.entries)} recorded primitives")


def finite_difference_gradients(
    loss_fn: Callable[[], torch.Tensor],
    params: Sequence[torch.Tensor],
    h: float = 1e-6,
) -> list[torch.Tensor]:
    """Central-difference gradient of ``loss_fn`` for every coordinate of ``params``.

    Each coordinate is restored after probing.

    Raises:
        AutodiffError: If the loss is non-finite at a shifted coordinate
    """
    numeric: list[torch.Tensor] = []
    with torch.no_grad():
        for p in params:
            flat = p.view(-1)
            out = torch.empty(flat.numel(), dtype=DTYPE)
            for i in range(flat.numel()):
                original = flat[i].item()
                flat[i] = original + h
                plus = loss_fn().item()
                flat[i] = original - h
                minus = loss_fn().item()
                flat[i] = original
                if not (math.isfinite(plus) and math.isfinite(minus)):
                    raise AutodiffError(f"Non-finite loss while probing coordinate {i}")
                out[i] = (plus - minus) / (2 * h)
            numeric.append(out.reshape(p.shape))
    return numeric


def autograd_gradients(
    loss_fn: Callable[[], torch.Tensor], params: Sequence[torch.Tensor]
) -> list[torch.Tensor]:
    """Reverse-mode gradient of ``loss_fn``; unused parameters get zeros."""
    loss = loss_fn()
    _require_finite("loss", loss.detach())
    grads = torch.autograd.grad(loss, list(params), allow_unused=True)
    return [torch.zeros_like(p) if g is None else g.detach() for p, g in zip(params, grads)]


def grad_check(
    loss_fn: Callable[[], torch.Tensor],
    params: Sequence[torch.Tensor],
    h: float = 1e-6,
    abs_floor: float = 1e-8,
    analytic: Sequence[torch.Tensor] | None = None,
) -> float:
    """Largest relative error between analytic and central-difference gradients.

    Args:
        loss_fn: Deterministic scalar loss over ``params``
        params: Leaf tensors with ``requires_grad``
        h: Finite-difference step
        abs_floor: Lower bound of the relative-error denominator
        analytic: Gradients to check; computed by autograd when omitted

    Returns:
        ``max |a - n| / max(|a|, |n|, abs_floor)`` over every coordinate

    Raises:
        AutodiffError: If the loss is non-finite
    """
    if analytic is None:
        analytic = autograd_gradients(loss_fn, params)
    numeric = finite_difference_gradients(loss_fn, params, h)

    worst = 0.0
    for a, n in zip(analytic, numeric):
        a64 = a.detach().reshape(-1).to(DTYPE)
        n64 = n.reshape(-1)
        denom = torch.maximum(torch.maximum(a64.abs(), n64.abs()), torch.tensor(abs_floor, dtype=DTYPE))
        if a64.numel():
            worst = max(worst, float(((a64 - n64).abs() / denom).max()))
    return worst
