"""Signed variable-clause bi-adjacency and its two-hop meta-path adjacencies."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Final

import numpy as np

from trsat.cnf.formula import Polarity
from trsat.exceptions import ShapeError
from trsat.graph.sparse import SparseMatrix, sparse_matmul

if TYPE_CHECKING:
    from trsat.cnf.formula import CnfFormula

logger = logging.getLogger(__name__)

MetaPathKey = tuple[Polarity, Polarity]

META_PATH_KEYS: Final[tuple[MetaPathKey, ...]] = (
    (Polarity.POSITIVE, Polarity.POSITIVE),
    (Polarity.POSITIVE, Polarity.NEGATIVE),
    (Polarity.NEGATIVE, Polarity.POSITIVE),
    (Polarity.NEGATIVE, Polarity.NEGATIVE),
)


@dataclass(frozen=True)
class SignedBiAdjacency:
    """``a_plus[i, j] = 1`` iff variable i occurs positively in clause j; ``a_minus`` likewise."""

    a_plus: SparseMatrix
    a_minus: SparseMatrix

    def __post_init__(self) -> None:
        if self.a_plus.shape != self.a_minus.shape:
            raise ShapeError(f"A+ is {self.a_plus.shape} but A- is {self.a_minus.shape}")
        if self.a_plus.csr.multiply(self.a_minus.csr).count_nonzero():
            raise ShapeError("A variable occurs with both polarities in one clause")

    @property
    def num_variables(self) -> int:
        return self.a_plus.rows

    @property
    def num_clauses(self) -> int:
        return self.a_plus.cols

    def side(self, polarity: Polarity) -> SparseMatrix:
        return self.a_plus if polarity is Polarity.POSITIVE else self.a_minus


@dataclass(frozen=True)
class MetaPathSet:
    """Binarized two-hop adjacencies keyed by the signs of both hops.

    ``var_side[(s, t)]`` links variable i to variable k when some clause holds i with
    sign s and k with sign t. ``clause_side[(s, t)]`` links clause j to clause l when
    some variable occurs with sign s in j and sign t in l. The ``*_counts`` matrices
    keep the products before binarization.
    """

    var_side: dict[MetaPathKey, SparseMatrix]
    clause_side: dict[MetaPathKey, SparseMatrix]
    var_counts: dict[MetaPathKey, SparseMatrix]
    clause_counts: dict[MetaPathKey, SparseMatrix]


@dataclass(frozen=True)
class GraphArtifacts:
    """Everything the model consumes for one formula, built once and reused across epochs."""

    biadjacency: SignedBiAdjacency
    meta_paths: MetaPathSet


def build_biadjacency(f: CnfFormula) -> SignedBiAdjacency:
    """Decompose a formula into its positive and negative incidence matrices."""
    edges = f.edges
    shape = (f.num_variables, f.num_clauses)
    mats = []
    for sign in (1, -1):
        mask = edges.signs == sign
        mats.append(
            SparseMatrix.from_entries(
                *shape,
                zip(
                    edges.variables[mask].tolist(),
                    edges.clauses[mask].tolist(),
                    np.ones(int(mask.sum())).tolist(),
                ),
            )
        )
    return SignedBiAdjacency(a_plus=mats[0], a_minus=mats[1])


def meta_paths(b: SignedBiAdjacency) -> MetaPathSet:
    """Compute all eight meta-path adjacencies of a bi-adjacency pair."""
    var_counts: dict[MetaPathKey, SparseMatrix] = {}
    clause_counts: dict[MetaPathKey, SparseMatrix] = {}
    for s, t in META_PATH_KEYS:
        var_counts[(s, t)] = sparse_matmul(b.side(s), b.side(t).transpose())
        clause_counts[(s, t)] = sparse_matmul(b.side(s).transpose(), b.side(t))
    return MetaPathSet(
        var_side={k: m.binarize() for k, m in var_counts.items()},
        clause_side={k: m.binarize() for k, m in clause_counts.items()},
        var_counts=var_counts,
        clause_counts=clause_counts,
    )


def build_graph_artifacts(f: CnfFormula) -> GraphArtifacts:
    b = build_biadjacency(f)
    paths = meta_paths(b)
    logger.debug(
        f"Graph for {f!r}: nnz(A+)={b.a_plus.nnz}, nnz(A-)={b.a_minus.nnz}, "
        f"var meta-path nnz={sum(m.nnz for m in paths.var_side.values())}"
    )
    return GraphArtifacts(biadjacency=b, meta_paths=paths)
