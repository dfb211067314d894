"""Tensor, antisymmetric (compound) and symmetric powers, symmetrizers and induced operators.

Basis conventions, fixed so entries are reproducible:

* ``full_tensor``: all ``n^r`` index tuples in lexicographic order, which is
  the order produced by iterated :func:`kronecker`.
* ``antisymmetric_subsets``: strictly increasing ``r``-tuples, lexicographic.
* ``symmetric_multisets``: weakly increasing ``r``-tuples, lexicographic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import core
from .core import LoewnerVerdict, determinant, frobenius
from .errors import (
    DegenerateSymmetrizedTensorError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    NotIdempotentError,
    NotSquareError,
    SubspaceNotInvariantError,
    TooLargeError,
)
from .functions import permanent
from .groups import CharacterFunction, PermutationGroup

TENSOR_MAX_DIM = 4096
SYMMETRIC_MAX_DIM = 1024

PowerKind = Literal["tensor", "wedge", "vee"]
POWER_KINDS: tuple[PowerKind, ...] = ("tensor", "wedge", "vee")


def _square(a) -> np.ndarray:
    m = core.as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got {m.shape[0]}x{m.shape[1]}")
    return m


@dataclass(frozen=True)
class IndexBasis:
    kind: str
    n: int
    r: int
    labels: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.labels)


def index_basis(kind: str, n: int, r: int) -> IndexBasis:
    if kind == "full_tensor":
        labels = itertools.product(range(n), repeat=r)
    elif kind == "antisymmetric_subsets":
        labels = itertools.combinations(range(n), r)
    elif kind == "symmetric_multisets":
        labels = itertools.combinations_with_replacement(range(n), r)
    else:
        raise ValueError(f"unknown basis kind {kind!r}")
    return IndexBasis(kind, n, r, tuple(labels))


# ---------------------------------------------------------------------------
# powers
# ---------------------------------------------------------------------------

def kronecker(a, b) -> np.ndarray:
    """``A (x) B``: the block matrix whose ``(i, j)`` block is ``a_ij * B``."""
    return np.kron(core.as_matrix(a), core.as_matrix(b))


def tensor_power(a, r: int) -> np.ndarray:
    m = _square(a)
    if r < 1:
        raise IndexOutOfRangeError("r must be positive")
    if m.shape[0] ** r > TENSOR_MAX_DIM:
        raise TooLargeError(f"n^r = {m.shape[0] ** r} exceeds {TENSOR_MAX_DIM}")
    out = m
    for _ in range(r - 1):
        out = np.kron(out, m)
    return out


def compound(a, r: int) -> np.ndarray:
    """The ``r``-th multiplicative compound: all ``r x r`` minors ``det A[alpha|beta]``."""
    m = _square(a)
    n = m.shape[0]
    if not 1 <= r <= n:
        raise IndexOutOfRangeError(f"compound order must satisfy 1 <= r <= {n}, got {r}")
    labels = index_basis("antisymmetric_subsets", n, r).labels
    out = np.empty((len(labels), len(labels)), dtype=np.complex128)
    for i, alpha in enumerate(labels):
        rows = m[list(alpha)]
        for j, beta in enumerate(labels):
            out[i, j] = determinant(rows[:, list(beta)])
    return out


def _multiplicity_weight(t: tuple[int, ...]) -> int:
    w = 1
    for _, grp in itertools.groupby(t):
        w *= math.factorial(len(list(grp)))
    return w


def symmetric_power(a, r: int) -> np.ndarray:
    """``r``-th symmetric power: ``per A[alpha|beta] / sqrt(mu(alpha) mu(beta))`` over multisets."""
    m = _square(a)
    n = m.shape[0]
    if r < 1:
        raise IndexOutOfRangeError("r must be positive")
    dim = math.comb(n + r - 1, r)
    if dim > SYMMETRIC_MAX_DIM:
        raise TooLargeError(f"C(n+r-1, r) = {dim} exceeds {SYMMETRIC_MAX_DIM}")
    labels = index_basis("symmetric_multisets", n, r).labels
    weights = np.sqrt([_multiplicity_weight(t) for t in labels])
    out = np.empty((dim, dim), dtype=np.complex128)
    for i, alpha in enumerate(labels):
        rows = m[list(alpha)]
        for j, beta in enumerate(labels):
            out[i, j] = permanent(rows[:, list(beta)]) / (weights[i] * weights[j])
    return out


def power(a, r: int, kind: PowerKind) -> np.ndarray:
    if kind == "tensor":
        return tensor_power(a, r)
    if kind == "wedge":
        return compound(a, r)
    if kind == "vee":
        return symmetric_power(a, r)
    raise ValueError(f"unknown power kind {kind!r}")


# ---------------------------------------------------------------------------
# determinant exponents of the powers
# ---------------------------------------------------------------------------

def classical_det_exponent(kind: PowerKind, n: int, r: int) -> float:
    """``det P(A) = (det A)^k``: ``r n^(r-1)``, ``C(n-1, r-1)`` (Sylvester-Franke), ``C(n+r-1, n)``."""
    if kind == "tensor":
        return float(r * n ** (r - 1))
    if kind == "wedge":
        return float(math.comb(n - 1, r - 1))
    if kind == "vee":
        return r / n * math.comb(n + r - 1, r)
    raise ValueError(kind)


def printed_det_exponent(kind: PowerKind, n: int, r: int) -> float:
    """Exponents as commonly printed, with ``C(n-r, r-1)`` for the compound."""
    if kind == "wedge":
        return float(math.comb(n - r, r - 1)) if n - r >= 0 else 0.0
    return classical_det_exponent(kind, n, r)


def estimate_det_exponent(kind: PowerKind, n: int, r: int, rng: core.SeedLike = 0) -> float:
    """``log det P(A) / log det A`` on a random positive definite ``A`` with ``det A`` far from 1."""
    gen = core.make_rng(rng)
    a = core.random_psd(n, gen) + np.eye(n)
    logdet = math.log(determinant(a).real)
    # push det A away from 1 so the ratio is well conditioned
    a = a * math.exp((2.0 - logdet) / n)
    logdet = math.log(determinant(a).real)
    return math.log(abs(determinant(power(a, r, kind)))) / logdet


# ---------------------------------------------------------------------------
# symmetry classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SymmetrizerContext:
    """The symmetrizer of ``(G, chi)`` on ``(x)^n V`` and an orthonormal basis of its range.

    ``symmetrizer`` is ``(1/|G|) sum chi(sigma) P_sigma``; it equals the
    orthogonal projection onto the symmetry class divided by ``deg chi``.
    """

    group: PermutationGroup
    character: CharacterFunction
    dim_v: int
    symmetrizer: np.ndarray
    range_basis: np.ndarray

    @property
    def projection(self) -> np.ndarray:
        return self.character.degree * self.symmetrizer

    @property
    def class_dimension(self) -> int:
        return self.range_basis.shape[1]


def permutation_operator_targets(sigma_images, dim_v: int) -> np.ndarray:
    """Row index hit by each basis column under ``v_1 (x)...(x) v_n -> v_s(1) (x)...(x) v_s(n)``, ``s = sigma^-1``."""
    n = len(sigma_images)
    inv = np.argsort(np.asarray(sigma_images))
    idx = np.array(list(itertools.product(range(dim_v), repeat=n)), dtype=np.intp).reshape(-1, n)
    weights = dim_v ** np.arange(n - 1, -1, -1)
    return idx[:, inv] @ weights


def symmetrizer(group: PermutationGroup, chi: CharacterFunction, dim_v: int,
                tol: float = 1e-8) -> SymmetrizerContext:
    n = group.degree
    size = dim_v**n
    if size > TENSOR_MAX_DIM:
        raise TooLargeError(f"dim_V^n = {size} exceeds {TENSOR_MAX_DIM}")
    if chi.group is not group:
        raise DimensionMismatchError("character belongs to a different group")
    s = np.zeros((size, size), dtype=np.complex128)
    cols = np.arange(size)
    for sigma, value in zip(group.elements, chi.values):
        s[permutation_operator_targets(sigma.images, dim_v), cols] += value / group.order
    proj = chi.degree * s
    if frobenius(proj @ proj - proj) > tol * (1.0 + frobenius(proj)):
        raise NotIdempotentError("deg(chi) * S is not a projection; is chi irreducible?")
    w, v = core.jacobi_eigh(proj)
    basis = v[:, w > 0.5]
    gram = basis.conj().T @ basis
    if basis.shape[1] and np.max(np.abs(gram - np.eye(basis.shape[1]))) > 1e-10:
        raise NotIdempotentError("range basis is not orthonormal")
    return SymmetrizerContext(group, chi, dim_v, s, basis)


def induced_operator(ctx: SymmetrizerContext, a) -> np.ndarray:
    """Matrix of ``(x)^n A`` restricted to the symmetry class, in ``ctx.range_basis`` coordinates."""
    m = _square(a)
    if m.shape[0] != ctx.dim_v:
        raise DimensionMismatchError(f"operator of size {m.shape[0]} on V of dimension {ctx.dim_v}")
    big = tensor_power(m, ctx.group.degree)
    b = ctx.range_basis
    image = big @ b
    leak = image - b @ (b.conj().T @ image)
    if frobenius(leak) > 1e-7 * (1.0 + frobenius(m) ** ctx.group.degree):
        raise SubspaceNotInvariantError("symmetry class is not invariant under (x)^n A")
    return b.conj().T @ image


def decomposable_symmetrized_tensor(ctx: SymmetrizerContext) -> np.ndarray:
    """``e* = deg(chi) * S(e_1 (x) ... (x) e_n)``, the projection of the standard decomposable tensor."""
    n = ctx.group.degree
    if ctx.dim_v < n:
        raise DimensionMismatchError("e_1 (x) ... (x) e_n needs dim V >= n")
    col = int(np.dot(np.arange(n), ctx.dim_v ** np.arange(n - 1, -1, -1)))
    return ctx.projection[:, col].copy()


def gmf_via_induced(ctx: SymmetrizerContext, a) -> complex:
    """``(|G| / deg chi) <K(A) e*, e*>``, which equals the immanant of ``A^T``."""
    n = ctx.group.degree
    if ctx.dim_v != n:
        raise DimensionMismatchError(f"need dim V = n = {n}, got {ctx.dim_v}")
    estar = decomposable_symmetrized_tensor(ctx)
    if np.linalg.norm(estar) <= 1e-12:
        raise DegenerateSymmetrizedTensorError("e* vanishes for this (G, chi)")
    coords = ctx.range_basis.conj().T @ estar
    k = induced_operator(ctx, a)
    return complex(ctx.group.order / ctx.character.degree * np.vdot(coords, k @ coords))


# ---------------------------------------------------------------------------
# superadditivity checks
# ---------------------------------------------------------------------------

def tensor_superadditivity_check(a, b, r: int, kind: PowerKind = "tensor",
                                 tol: float = 1e-8) -> LoewnerVerdict:
    """Verdict on ``P(A + B) - P(A) - P(B) >= 0``."""
    ma, mb = _square(a), _square(b)
    if ma.shape != mb.shape:
        raise DimensionMismatchError(f"shapes {ma.shape} and {mb.shape} differ")
    top = power(ma + mb, r, kind)
    return _verdict(top - power(ma, r, kind) - power(mb, r, kind), tol, top)


def three_matrix_tensor_check(a, b, c, r: int, kind: PowerKind = "tensor",
                              tol: float = 1e-8) -> LoewnerVerdict:
    """Verdict on ``P(A+B+C) + P(A) + P(B) + P(C) - P(A+B) - P(A+C) - P(B+C) >= 0``."""
    ma, mb, mc = _square(a), _square(b), _square(c)
    if not ma.shape == mb.shape == mc.shape:
        raise DimensionMismatchError("matrices differ in size")

    def p(x):
        return power(x, r, kind)

    top = p(ma + mb + mc)
    diff = top + p(ma) + p(mb) + p(mc) - p(ma + mb) - p(ma + mc) - p(mb + mc)
    return _verdict(diff, tol, top)


def _verdict(diff: np.ndarray, tol: float, top: np.ndarray) -> LoewnerVerdict:
    # cancellation error scales with the largest power term, not with the difference
    lam = float(core.hermitian_eigenvalues(diff)[0])
    used = tol * (1.0 + frobenius(top))
    return LoewnerVerdict(lam >= -used, lam, used)
