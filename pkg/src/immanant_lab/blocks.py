"""Block matrices in M_m(M_n): partial traces, reshuffle, partial matrix functions.

A :class:`BlockMatrix` stores its blocks as an ``(m, m, n, n)`` array; block
``(i, j)`` occupies rows ``[i*n, (i+1)*n)`` and columns ``[j*n, (j+1)*n)``
of the flattened ``(mn) x (mn)`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .errors import DimensionMismatchError, NonFiniteError
from .functions import MatrixFunctional, apply_functional
from .multilinear import tensor_power


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    blocks: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=np.complex128)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3] or b.size == 0:
            raise DimensionMismatchError(f"blocks must have shape (m, m, n, n), got {b.shape}")
        if not np.all(np.isfinite(b)):
            raise NonFiniteError("block matrix has NaN or Inf entries")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)

    @property
    def m(self) -> int:
        return self.blocks.shape[0]

    @property
    def n(self) -> int:
        return self.blocks.shape[2]

    @classmethod
    def from_flat(cls, a, m: int, n: int) -> "BlockMatrix":
        flat = core.as_matrix(a)
        if flat.shape != (m * n, m * n):
            raise DimensionMismatchError(f"{flat.shape} cannot be split into {m}x{m} blocks of size {n}")
        return cls(flat.reshape(m, n, m, n).transpose(0, 2, 1, 3))

    @classmethod
    def from_blocks(cls, rows) -> "BlockMatrix":
        """Build from a nested ``m x m`` list of ``n x n`` matrices."""
        return cls(np.array([[core.as_matrix(b) for b in row] for row in rows]))

    def flatten(self) -> np.ndarray:
        m, n = self.m, self.n
        return self.blocks.transpose(0, 2, 1, 3).reshape(m * n, m * n).copy()

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i, j].copy()

    def __add__(self, other: "BlockMatrix") -> "BlockMatrix":
        if self.blocks.shape != other.blocks.shape:
            raise DimensionMismatchError("block shapes differ")
        return BlockMatrix(self.blocks + other.blocks)

    def map_blocks(self, fn) -> "BlockMatrix":
        return BlockMatrix.from_blocks([[fn(self.blocks[i, j]) for j in range(self.m)] for i in range(self.m)])

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "blocks": [[core.matrix_to_json(self.blocks[i, j]) for j in range(self.m)] for i in range(self.m)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BlockMatrix":
        try:
            m, n, rows = int(obj["m"]), int(obj["n"]), obj["blocks"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed block-matrix JSON: {exc}") from exc
        if len(rows) != m or any(len(row) != m for row in rows):
            raise ValueError(f"block-matrix JSON must hold {m}x{m} blocks")
        out = cls.from_blocks([[core.matrix_from_json(b) for b in row] for row in rows])
        if out.n != n:
            raise ValueError(f"blocks are {out.n}x{out.n}, header says {n}")
        return out


def partial_trace_1(a: BlockMatrix) -> np.ndarray:
    """``tr_1(A) = sum_i A_ii`` (an ``n x n`` matrix)."""
    return np.einsum("iirs->rs", a.blocks)


def partial_trace_2(a: BlockMatrix) -> np.ndarray:
    """``tr_2(A) = [tr A_ij]`` (an ``m x m`` matrix)."""
    return np.einsum("ijrr->ij", a.blocks)


def hs_inner(x, y) -> complex:
    """Hilbert-Schmidt product ``tr(X* Y)``."""
    return complex(np.vdot(np.asarray(x), np.asarray(y)))


def reshuffle(a: BlockMatrix) -> BlockMatrix:
    """The ``n x n`` block matrix ``[G_rs]`` with ``G_rs = [a^{ij}_rs]_{i,j}``; an involution."""
    return BlockMatrix(a.blocks.transpose(2, 3, 0, 1))


def partial_function_2(f: MatrixFunctional, a: BlockMatrix) -> np.ndarray:
    """``[f(A_ij)]_{i,j}`` (``m x m``)."""
    m = a.m
    out = np.empty((m, m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            out[i, j] = apply_functional(f, a.blocks[i, j])
    return out


def partial_function_1(f: MatrixFunctional, a: BlockMatrix) -> np.ndarray:
    """``[f(G_rs)]_{r,s}`` (``n x n``), evaluated as the second partial function of the reshuffle."""
    return partial_function_2(f, reshuffle(a))


# ---------------------------------------------------------------------------
# principal-submatrix embedding of blockwise tensor powers
# ---------------------------------------------------------------------------

def block_tensor_power(a: BlockMatrix, r: int) -> BlockMatrix:
    """``[(x)^r A_ij]_{i,j}``."""
    return a.map_blocks(lambda x: tensor_power(x, r))


def principal_embedding_indices(m: int, n: int, r: int) -> np.ndarray:
    """Rows of ``(x)^r flatten(A)`` forming ``[(x)^r A_ij]`` as a principal submatrix.

    Row ``(i, t_1, ..., t_r)`` of the block tensor power sits at the tensor
    index ``((i, t_1), ..., (i, t_r))``, i.e. at
    ``sum_k (i*n + t_k) * (m*n)^(r-1-k)``.
    """
    mn = m * n
    weights = mn ** np.arange(r - 1, -1, -1)
    out = []
    for i in range(m):
        for t in np.ndindex(*(n,) * r):
            out.append(int(np.dot(i * n + np.array(t, dtype=np.int64), weights)))
    return np.array(out, dtype=np.intp)


def search_principal_embedding(a: BlockMatrix, r: int, limit: int = 2) -> list[np.ndarray]:
    """All index maps (up to ``limit``) realizing ``[(x)^r A_ij]`` as a principal submatrix of ``(x)^r A``.

    Plain backtracking with exact entry comparison, so it is meant for small
    ``m, n, r`` and a generic ``A``.
    """
    small = block_tensor_power(a, r).flatten()
    big = tensor_power(a.flatten(), r)
    k = small.shape[0]
    diag = np.diag(big)
    found: list[np.ndarray] = []
    chosen: list[int] = []

    def extend(row: int):
        if len(found) >= limit:
            return
        if row == k:
            found.append(np.array(chosen, dtype=np.intp))
            return
        for p in np.flatnonzero(diag == small[row, row]):
            if p in chosen:
                continue
            prev = np.array(chosen, dtype=np.intp)
            if prev.size and not (np.array_equal(big[p, prev], small[row, :row])
                                  and np.array_equal(big[prev, p], small[:row, row])):
                continue
            chosen.append(int(p))
            extend(row + 1)
            chosen.pop()

    extend(0)
    return found
