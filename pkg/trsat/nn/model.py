"""Meta-path encoder / bipartite decoder network producing soft variable assignments."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import torch
from torch import nn

from trsat.cnf.formula import Assignment, Polarity
from trsat.exceptions import ModelConfigError, ShapeError
from trsat.graph.bipartite import META_PATH_KEYS
from trsat.nn.autodiff import (
    DTYPE,
    ComputationRecord,
    dense_affine,
    layer_norm,
    sparse_attention,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import ArrayLike, NDArray

    from trsat.cnf.formula import CnfFormula
    from trsat.graph.bipartite import MetaPathSet, SignedBiAdjacency
    from trsat.graph.sparse import SparseMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelConfig:
    """Architecture and inference settings."""

    num_encoder_layers: int = 4
    num_decoder_layers: int = 4
    channels: int = 64
    heads: int = 4
    ffn_hidden: int = 256
    tau: float = 5.0
    epsilon_threshold: float = 0.01
    init_seed: int = 0
    noise_scale: float = 1.0

    def __post_init__(self) -> None:
        for name in ("num_encoder_layers", "num_decoder_layers", "channels", "heads", "ffn_hidden"):
            value = getattr(self, name)
            if value < 1:
                raise ModelConfigError(f"{name} must be >= 1, got {value}")
        if self.channels % self.heads:
            raise ModelConfigError(
                f"channels ({self.channels}) must be divisible by heads ({self.heads})"
            )
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ModelConfigError(f"tau must be positive, got {self.tau}")
        if not 0 < self.epsilon_threshold < 0.5:
            raise ModelConfigError(
                f"epsilon_threshold must be in (0, 0.5), got {self.epsilon_threshold}"
            )
        if self.noise_scale < 0:
            raise ModelConfigError(f"noise_scale must be >= 0, got {self.noise_scale}")



@dataclass(frozen=True)
class VariableOutputs:
    """Soft assignment ``x`` in [0, 1], one entry per variable."""

    x: torch.Tensor

    def to_numpy(self) -> NDArray[np.float64]:
        return np.asarray(self.x.detach().cpu().numpy(), dtype=np.float64)

    def __len__(self) -> int:
        return int(self.x.shape[0])


class Affine(nn.Module):
    def __init__(self, fan_in: int, fan_out: int) -> None:
        super().__init__()
        self.weight = nn.Parameter(torch.zeros(fan_in, fan_out, dtype=DTYPE))
        self.bias = nn.Parameter(torch.zeros(fan_out, dtype=DTYPE))

    def forward(
        self, x: torch.Tensor, record: ComputationRecord | None = None, label: str = ""
    ) -> torch.Tensor:
        return dense_affine(x, self.weight, self.bias, record, label)


class LayerNorm(nn.Module):
    def __init__(self, width: int) -> None:
        super().__init__()
        self.gain = nn.Parameter(torch.ones(width, dtype=DTYPE))
        self.bias = nn.Parameter(torch.zeros(width, dtype=DTYPE))

    def forward(
        self, x: torch.Tensor, record: ComputationRecord | None = None, label: str = ""
    ) -> torch.Tensor:
        return layer_norm(x, self.gain, self.bias, record, label)


class AttentionProjections(nn.Module):
    """Query, key and value maps for one attention relation."""

    def __init__(self, channels: int) -> None:
        super().__init__()
        self.query = Affine(channels, channels)
        self.key = Affine(channels, channels)
        self.value = Affine(channels, channels)

    def forward(
        self,
        targets: torch.Tensor,
        sources: torch.Tensor,
        topology: SparseMatrix,
        heads: int,
        record: ComputationRecord | None,
        label: str,
    ) -> torch.Tensor:
        q = self.query(targets, record, f"{label}.query")
        k = self.key(sources, record, f"{label}.key")
        v = self.value(sources, record, f"{label}.value")
        return sparse_attention(q, k, v, topology, heads, record, label)


class RelationBlock(nn.Module):
    """Attention over several relations, concatenated, merged to F, residual, layer norm."""

    def __init__(self, channels: int, relations: int) -> None:
        super().__init__()
        self.relations = nn.ModuleList(AttentionProjections(channels) for _ in range(relations))
        self.merge = Affine(relations * channels, channels)
        self.norm = LayerNorm(channels)

    def forward(
        self,
        targets: torch.Tensor,
        sources: torch.Tensor,
        topologies: Sequence[SparseMatrix],
        heads: int,
        record: ComputationRecord | None,
        label: str,
    ) -> torch.Tensor:
        branches = [
            rel(targets, sources, topo, heads, record, f"{label}.rel{i}")
            for i, (rel, topo) in enumerate(zip(self.relations, topologies))
        ]
        merged = self.merge(torch.cat(branches, dim=1), record, f"{label}.merge")
        return self.norm(targets + merged, record, f"{label}.norm")


class FeedForward(nn.Module):
    def __init__(self, channels: int, hidden: int) -> None:
        super().__init__()
        self.inner = Affine(channels, hidden)
        self.outer = Affine(hidden, channels)
        self.norm = LayerNorm(channels)

    def forward(
        self, h: torch.Tensor, record: ComputationRecord | None, label: str
    ) -> torch.Tensor:
        hidden = torch.relu(self.inner(h, record, f"{label}.inner"))
        return self.norm(h + self.outer(hidden, record, f"{label}.outer"), record, f"{label}.norm")


class EncoderLayer(nn.Module):
    """Self-attention within each node kind along the four meta-path types."""

    def __init__(self, cfg: ModelConfig) -> None:
        super().__init__()
        self.variables = RelationBlock(cfg.channels, len(META_PATH_KEYS))
        self.clauses = RelationBlock(cfg.channels, len(META_PATH_KEYS))

    def forward(
        self,
        hv: torch.Tensor,
        hc: torch.Tensor,
        mp: MetaPathSet,
        heads: int,
        record: ComputationRecord | None,
        label: str,
    ) -> tuple[torch.Tensor, torch.Tensor]:
        var_topo = [mp.var_side[key] for key in META_PATH_KEYS]
        clause_topo = [mp.clause_side[key] for key in META_PATH_KEYS]
        new_hv = self.variables(hv, hv, var_topo, heads, record, f"{label}.var")
        new_hc = self.clauses(hc, hc, clause_topo, heads, record, f"{label}.clause")
        return new_hv, new_hc


class DecoderLayer(nn.Module):
    """Clauses attend to variables, then variables to clauses, then per-kind FFN."""

    def __init__(self, cfg: ModelConfig) -> None:
        super().__init__()
        self.clause_update = RelationBlock(cfg.channels, 2)
        self.var_update = RelationBlock(cfg.channels, 2)
        self.var_ffn = FeedForward(cfg.channels, cfg.ffn_hidden)
        self.clause_ffn = FeedForward(cfg.channels, cfg.ffn_hidden)

    def forward(
        self,
        hv: torch.Tensor,
        hc: torch.Tensor,
        incidence: Sequence[SparseMatrix],
        incidence_t: Sequence[SparseMatrix],
        heads: int,
        record: ComputationRecord | None,
        label: str,
    ) -> tuple[torch.Tensor, torch.Tensor]:
        hc = self.clause_update(hc, hv, incidence_t, heads, record, f"{label}.clause")
        hv = self.var_update(hv, hc, incidence, heads, record, f"{label}.var")
        hv = self.var_ffn(hv, record, f"{label}.var_ffn")
        hc = self.clause_ffn(hc, record, f"{label}.clause_ffn")
        return hv, hc


class TrsatModel(nn.Module):
    """Encoder/decoder stack over the signed bipartite graph of a CNF formula."""

    def __init__(self, cfg: ModelConfig) -> None:
        super().__init__()
        self.config = cfg
        f = cfg.channels
        self.var_type_embedding = nn.Parameter(torch.zeros(f, dtype=DTYPE))
        self.clause_type_embedding = nn.Parameter(torch.zeros(f, dtype=DTYPE))
        self.input_projection = Affine(f, f)
        self.encoders = nn.ModuleList(EncoderLayer(cfg) for _ in range(cfg.num_encoder_layers))
        self.decoders = nn.ModuleList(DecoderLayer(cfg) for _ in range(cfg.num_decoder_layers))
        self.readout = Affine(f, 1)
        self.reset_parameters()

    def reset_parameters(self) -> None:
        """Seeded init: Xavier-uniform weights, zero biases, unit layer-norm gains."""
        generator = torch.Generator().manual_seed(self.config.init_seed)
        with torch.no_grad():
            for name, p in self.named_parameters():
                if name.endswith("embedding"):
                    bound = math.sqrt(6.0 / (1 + p.shape[0]))
                    p.uniform_(-bound, bound, generator=generator)
                elif p.dim() == 2:
                    bound = math.sqrt(6.0 / (p.shape[0] + p.shape[1]))
                    p.uniform_(-bound, bound, generator=generator)
                elif name.endswith("gain"):
                    p.fill_(1.0)
                else:
                    p.zero_()

    def num_parameters(self) -> int:
        return sum(p.numel() for p in self.parameters())

    def forward(
        self,
        f: CnfFormula,
        b: SignedBiAdjacency,
        mp: MetaPathSet,
        instance_seed: int,
        record: ComputationRecord | None = None,
        noise: tuple[torch.Tensor, torch.Tensor] | None = None,
    ) -> VariableOutputs:
        hv, hc = initial_embeddings(f, b, self, instance_seed, record=record, noise=noise)
        heads = self.config.heads
        for i, encoder in enumerate(self.encoders):
            if record is not None:
                record.log("encoder_layer", f"encoder{i}", hv)
            hv, hc = encoder(hv, hc, mp, heads, record, f"encoder{i}")

        incidence = [b.side(Polarity.POSITIVE), b.side(Polarity.NEGATIVE)]
        incidence_t = [m.transpose() for m in incidence]
        for i, decoder in enumerate(self.decoders):
            if record is not None:
                record.log("decoder_layer", f"decoder{i}", hv)
            hv, hc = decoder(hv, hc, incidence, incidence_t, heads, record, f"decoder{i}")

        x = torch.sigmoid(self.readout(hv, record, "readout")).squeeze(1)
        return VariableOutputs(x)


def init_model(cfg: ModelConfig | None = None) -> TrsatModel:
    model = TrsatModel(cfg or ModelConfig())
    logger.debug(f"Initialised model with {model.num_parameters()} parameters")
    return model


def _check_graph(f: CnfFormula, b: SignedBiAdjacency) -> None:
    if b.num_variables != f.num_variables or b.num_clauses != f.num_clauses:
        raise ShapeError(
            f"Bi-adjacency {b.num_variables}x{b.num_clauses} built for a different formula "
            f"({f.num_variables} variables, {f.num_clauses} clauses)"
        )


def instance_noise(
    num_variables: int, num_clauses: int, channels: int, instance_seed: int
) -> tuple[torch.Tensor, torch.Tensor]:
    """Seeded unit-normal noise rows for variables and clauses."""
    generator = torch.Generator().manual_seed(instance_seed)
    var_noise = torch.randn(num_variables, channels, generator=generator, dtype=DTYPE)
    clause_noise = torch.randn(num_clauses, channels, generator=generator, dtype=DTYPE)
    return var_noise, clause_noise


def initial_embeddings(
    f: CnfFormula,
    b: SignedBiAdjacency,
    model: TrsatModel,
    instance_seed: int,
    record: ComputationRecord | None = None,
    noise: tuple[torch.Tensor, torch.Tensor] | None = None,
) -> tuple[torch.Tensor, torch.Tensor]:
    """Node features: type embedding plus projected seeded noise.

    ``noise`` replaces the seeded draw (before ``noise_scale`` is applied).
    """
    _check_graph(f, b)
    cfg = model.config
    if noise is None:
        noise = instance_noise(f.num_variables, f.num_clauses, cfg.channels, instance_seed)
    var_noise, clause_noise = (n * cfg.noise_scale for n in noise)
    if var_noise.shape != (f.num_variables, cfg.channels) or clause_noise.shape != (
        f.num_clauses,
        cfg.channels,
    ):
        raise ShapeError("Noise shapes do not match the formula")
    hv = model.var_type_embedding + model.input_projection(var_noise, record, "input.var")
    hc = model.clause_type_embedding + model.input_projection(clause_noise, record, "input.clause")
    return hv, hc


def forward(
    model: TrsatModel,
    f: CnfFormula,
    b: SignedBiAdjacency,
    mp: MetaPathSet,
    instance_seed: int,
    record: ComputationRecord | None = None,
) -> VariableOutputs:
    return model(f, b, mp, instance_seed, record=record)  # type: ignore[no-any-return]


def threshold(x: VariableOutputs | ArrayLike, eps: float) -> Assignment:
    """``v_i = floor(x_i / (0.5 + eps))`` for soft values in [0, 1].

    Raises:
        ModelConfigError: If ``eps`` is outside (0, 0.5)
    """
    if not 0 < eps < 0.5:
        raise ModelConfigError(f"Threshold epsilon must be in (0, 0.5), got {eps}")
    values = x.to_numpy() if isinstance(x, VariableOutputs) else np.asarray(x, dtype=np.float64)
    bits = np.floor(np.clip(values, 0.0, 1.0) / (0.5 + eps))
    return Assignment.from_bits(bits.astype(bool))

