"""Immutable compressed-row sparse matrices over float64."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np
from scipy import sparse

from trsat.exceptions import ShapeError

if TYPE_CHECKING:
    from collections.abc import Iterable

    from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """Canonical CSR matrix: duplicates summed, explicit zeros dropped, columns sorted per row.

    Entries iterate in (row, col) order.
    """

    csr: sparse.csr_array

    def __post_init__(self) -> None:
        csr = sparse.csr_array(self.csr, dtype=np.float64, copy=True)
        csr.sum_duplicates()
        csr.eliminate_zeros()
        csr.sort_indices()
        object.__setattr__(self, "csr", csr)

    @classmethod
    def from_entries(
        cls, rows: int, cols: int, entries: Iterable[tuple[int, int, float]]
    ) -> SparseMatrix:
        """Build from ``(row, col, value)`` triples.

        Raises:
            ShapeError: On a negative shape, an index out of range or a repeated (row, col)
        """
        if rows < 0 or cols < 0:
            raise ShapeError(f"Matrix shape must be non-negative, got {rows}x{cols}")
        seen: set[tuple[int, int]] = set()
        r_idx: list[int] = []
        c_idx: list[int] = []
        data: list[float] = []
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ShapeError(f"Entry ({r}, {c}) outside {rows}x{cols} matrix")
            if (r, c) in seen:
                raise ShapeError(f"Duplicate entry ({r}, {c})")
            seen.add((r, c))
            r_idx.append(r)
            c_idx.append(c)
            data.append(float(v))
        coords = (np.asarray(r_idx, dtype=np.int64), np.asarray(c_idx, dtype=np.int64))
        coo = sparse.coo_array((np.asarray(data, dtype=np.float64), coords), shape=(rows, cols))
        return cls(coo.tocsr())

    @classmethod
    def from_dense(cls, array: ArrayLike) -> SparseMatrix:
        arr = np.asarray(array, dtype=np.float64)
        if arr.ndim != 2:
            raise ShapeError(f"Expected a 2-D array, got shape {arr.shape}")
        return cls(sparse.csr_array(arr))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> SparseMatrix:
        return cls(sparse.csr_array((rows, cols), dtype=np.float64))

    @classmethod
    def identity(cls, size: int) -> SparseMatrix:
        return cls(sparse.csr_array(sparse.identity(size, dtype=np.float64, format="csr")))

    @property
    def shape(self) -> tuple[int, int]:
        rows, cols = self.csr.shape
        return int(rows), int(cols)

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    @property
    def nnz(self) -> int:
        return int(self.csr.nnz)

    @cached_property
    def row_indices(self) -> NDArray[np.int64]:
        """Row of every stored entry, in storage order."""
        counts = np.diff(self.csr.indptr)
        return np.repeat(np.arange(self.rows, dtype=np.int64), counts)

    @cached_property
    def col_indices(self) -> NDArray[np.int64]:
        """Column of every stored entry, in storage order."""
        return np.asarray(self.csr.indices, dtype=np.int64)

    @property
    def values(self) -> NDArray[np.float64]:
        return np.asarray(self.csr.data, dtype=np.float64)

    def entries(self) -> list[tuple[int, int, float]]:
        return [
            (int(r), int(c), float(v))
            for r, c, v in zip(self.row_indices, self.col_indices, self.values)
        ]

    def to_dense(self) -> NDArray[np.float64]:
        return np.asarray(self.csr.toarray(), dtype=np.float64)

    def transpose(self) -> SparseMatrix:
        return SparseMatrix(self.csr.transpose().tocsr())

    @property
    def T(self) -> SparseMatrix:  # noqa: N802
        return self.transpose()

    def binarize(self) -> SparseMatrix:
        """0/1 pattern of the stored nonzeros."""
        pattern = self.csr.copy()
        pattern.data = np.ones_like(pattern.data)
        return SparseMatrix(pattern)

    def to_coo_text(self) -> str:
        """``row col value`` per line, sorted by (row, col)."""
        return "".join(f"{r} {c} {v:g}\n" for r, c, v in self.entries())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self.entries())))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def sparse_matmul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Exact product ``a @ b``.

    Raises:
        ShapeError: If ``a.cols != b.rows``
    """
    if a.cols != b.rows:
        raise ShapeError(f"Cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    return SparseMatrix(sparse.csr_array(a.csr @ b.csr))
