"""Numeric core, model, loss and checkpoints."""

from __future__ import annotations

from trsat.nn.autodiff import (
    ComputationRecord,
    DenseMatrix,
    Parameter,
    attention_coefficients,
    autograd_gradients,
    backward,
    dense_affine,
    finite_difference_gradients,
    grad_check,
    layer_norm,
    sparse_attention,
)
from trsat.nn.checkpoint import (
    dump_checkpoint,
    load_checkpoint,
    parse_checkpoint,
    save_checkpoint,
)
from trsat.nn.loss import (
    EdgePolarity,
    clause_scores,
    literal_value,
    neg_log_loss,
    phi_approx,
    smoothmax,
)
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

__all__ = [
    "ComputationRecord",
    "DenseMatrix",
    "EdgePolarity",
    "ModelConfig",
    "Parameter",
    "TrsatModel",
    "VariableOutputs",
    "attention_coefficients",
    "autograd_gradients",
    "backward",
    "clause_scores",
    "dense_affine",
    "dump_checkpoint",
    "finite_difference_gradients",
    "forward",
    "grad_check",
    "init_model",
    "initial_embeddings",
    "instance_noise",
    "layer_norm",
    "literal_value",
    "load_checkpoint",
    "neg_log_loss",
    "parse_checkpoint",
    "phi_approx",
    "save_checkpoint",
    "smoothmax",
    "sparse_attention",
    "threshold",
]
