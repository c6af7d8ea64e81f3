"""Sparse signed bipartite graphs and meta-path adjacencies."""

from __future__ import annotations

from trsat.graph.bipartite import (
    META_PATH_KEYS,
    GraphArtifacts,
    MetaPathKey,
    MetaPathSet,
    SignedBiAdjacency,
    build_biadjacency,
    build_graph_artifacts,
    meta_paths,
)
from trsat.graph.sparse import SparseMatrix, sparse_matmul

__all__ = [
    "META_PATH_KEYS",
    "GraphArtifacts",
    "MetaPathKey",
    "MetaPathSet",
    "SignedBiAdjacency",
    "SparseMatrix",
    "build_biadjacency",
    "build_graph_artifacts",
    "meta_paths",
    "sparse_matmul",
]
