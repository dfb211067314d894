"""Dense complex matrices: Hermitian eigensolver, Loewner-order checks, seeded PSD samples.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every public
function accepts anything ``numpy.asarray`` understands and never mutates its
inputs.

Randomness comes from numpy's ``PCG64`` bit generator seeded through
``SeedSequence``; Gaussian variates are produced from its uniforms with the
Box-Muller transform so that sample streams depend only on the PCG64 output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import (
    DimensionMismatchError,
    NoConvergenceError,
    NonFiniteError,
    NotHermitianError,
    NotSquareError,
)

RNG_ALGORITHM = "PCG64 (numpy SeedSequence) + Box-Muller"

EIG_MAX_SWEEPS = 100
EIG_RTOL = 1e-12
HERMITIAN_RTOL = 1e-10

SeedLike = Union[int, np.random.Generator, None]


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D complex128 array (a copy when conversion is needed)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1 and m.size == 1:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatchError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteError("matrix has NaN or Inf entries")
    return m


def _square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got {m.shape[0]}x{m.shape[1]}")
    return m


def frobenius(a) -> float:
    return float(np.sqrt(np.sum(np.abs(np.asarray(a)) ** 2)))


def conjugate_transpose(a) -> np.ndarray:
    return as_matrix(a).conj().T.copy()


def trace(a) -> complex:
    m = _square(a)
    return complex(np.sum(np.diag(m)))


def _bareiss(rows: list[list[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    m = [r[:] for r in rows]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def determinant(a) -> complex:
    """Determinant by Gaussian elimination with partial pivoting.

    Small matrices with integer entries (below 2**53 in size) take an exact
    fraction-free route instead, so integer inputs give exact integer results.
    """
    m = _square(a).copy()
    n = m.shape[0]
    if n <= 12 and not np.any(m.imag) and np.all(m.real == np.round(m.real)) \
            and np.max(np.abs(m.real)) < 2.0**53:
        return complex(_bareiss([[int(x) for x in row] for row in m.real]))
    det = 1.0 + 0.0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(m[k:, k])))
        if m[piv, k] == 0:
            return 0j
        if piv != k:
            m[[k, piv]] = m[[piv, k]]
            det = -det
        det *= m[k, k]
        if k + 1 < n:
            factors = m[k + 1:, k] / m[k, k]
            m[k + 1:, k:] -= np.outer(factors, m[k, k:])
    return complex(det)


# ---------------------------------------------------------------------------
# Hermitian eigensolver (cyclic complex Jacobi)
# ---------------------------------------------------------------------------

def _hermitian_part(a) -> np.ndarray:
    m = _square(a)
    scale = 1.0 + frobenius(m)
    asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if asym > HERMITIAN_RTOL * scale:
        raise NotHermitianError(f"max |A - A*| = {asym:.3e} exceeds {HERMITIAN_RTOL * scale:.3e}")
    return (m + m.conj().T) / 2


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off.real ** 2 + off.imag ** 2)))


def jacobi_eigh(a, vectors: bool = True, max_sweeps: int = EIG_MAX_SWEEPS, rtol: float = EIG_RTOL):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` with a
    diagonal unitary, then annihilates the (now real) pivot with a plane
    rotation.  Sweeps stop once the off-diagonal Frobenius norm drops below
    ``rtol * ||A||_F``.

    Returns ascending eigenvalues, and the unitary whose columns are the
    matching eigenvectors when ``vectors`` is true.
    """
    h = _hermitian_part(a)
    n = h.shape[0]
    if not vectors and n <= _SMALL_N:
        return _jacobi_values_small(h, max_sweeps, rtol)
    v = np.eye(n, dtype=np.complex128) if vectors else None
    thresh = rtol * frobenius(h)

    for _ in range(max_sweeps + 1):
        if _off_norm(h) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = h[p, q]
                az = abs(z)
                if az == 0.0:
                    continue
                theta = 0.5 * math.atan2(2.0 * az, h[q, q].real - h[p, p].real)
                c, s = math.cos(theta), math.sin(theta)
                ph = z / az
                cph = ph.conjugate()
                # columns: A <- A J with J = [[c, s], [-s conj(ph), c conj(ph)]]
                cp = h[:, p].copy()
                cq = h[:, q]
                h[:, p] = c * cp - (s * cph) * cq
                h[:, q] = s * cp + (c * cph) * cq
                # rows: A <- J* A
                rp = h[p, :].copy()
                rq = h[q, :]
                h[p, :] = c * rp - (s * ph) * rq
                h[q, :] = s * rp + (c * ph) * rq
                h[p, q] = 0.0
                h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q]
                    v[:, p] = c * vp - (s * cph) * vq
                    v[:, q] = s * vp + (c * cph) * vq
    else:
        raise NoConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(h).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    if v is None:
        return w
    return w, v[:, order]


_SMALL_N = 6


def _jacobi_values_small(h: np.ndarray, max_sweeps: int, rtol: float) -> np.ndarray:
    """Eigenvalues only, same rotations on Python lists (numpy scalar access dominates at this size)."""
    n = h.shape[0]
    a = h.tolist()
    thresh2 = (rtol * frobenius(h)) ** 2
    for _ in range(max_sweeps + 1):
        off2 = sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j)
        if off2 <= thresh2:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = a[p][q]
                az = abs(z)
                if az == 0.0:
                    continue
                theta = 0.5 * math.atan2(2.0 * az, a[q][q].real - a[p][p].real)
                c, s = math.cos(theta), math.sin(theta)
                ph = z / az
                cph = ph.conjugate()
                for row in a:
                    xp, xq = row[p], row[q]
                    row[p] = c * xp - s * cph * xq
                    row[q] = s * xp + c * cph * xq
                rp, rq = a[p], a[q]
                for k in range(n):
                    xp, xq = rp[k], rq[k]
                    rp[k] = c * xp - s * ph * xq
                    rq[k] = s * xp + c * ph * xq
                a[p][q] = a[q][p] = 0j
                a[p][p] = complex(a[p][p].real)
                a[q][q] = complex(a[q][q].real)
    else:
        raise NoConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(np.array([a[i][i].real for i in range(n)]))


def hermitian_eigenvalues(a) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    return jacobi_eigh(a, vectors=False)


# ---------------------------------------------------------------------------
# positivity and Loewner order
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LoewnerVerdict:
    holds: bool
    min_eigenvalue: float
    tolerance_used: float

    def __post_init__(self):
        if self.holds != (self.min_eigenvalue >= -self.tolerance_used):
            raise ValueError("inconsistent LoewnerVerdict")

    def __bool__(self) -> bool:
        return self.holds


def is_psd(a, tol: float = 1e-9) -> LoewnerVerdict:
    """Check ``A >= 0`` with the relative tolerance ``tol * (1 + ||A||_F)``."""
    m = _square(a)
    lam = float(hermitian_eigenvalues(m)[0])
    used = tol * (1.0 + frobenius(m))
    return LoewnerVerdict(lam >= -used, lam, used)


def loewner_ge(a, b, tol: float = 1e-9) -> LoewnerVerdict:
    """Check ``A >= B`` in the Loewner order."""
    ma, mb = _square(a), _square(b)
    if ma.shape != mb.shape:
        raise DimensionMismatchError(f"shapes {ma.shape} and {mb.shape} differ")
    return is_psd(ma - mb, tol)


# ---------------------------------------------------------------------------
# randomness
# ---------------------------------------------------------------------------

def make_rng(seed: SeedLike = 0, *salt: int) -> np.random.Generator:
    """A PCG64 generator for ``seed`` (a Generator passes through when no salt is given)."""
    if isinstance(seed, np.random.Generator):
        if not salt:
            return seed
        seed = int(seed.integers(0, 2**63))
    if seed is None:
        seed = 0
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(s) & 0xFFFFFFFFFFFFFFFF for s in salt)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def gaussian(rng: np.random.Generator, size) -> np.ndarray:
    """Standard normal samples by the Box-Muller transform."""
    size = tuple(np.atleast_1d(size))
    count = int(np.prod(size))
    half = (count + 1) // 2
    u1 = 1.0 - rng.random(half)  # in (0, 1]
    u2 = rng.random(half)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    return z[:count].reshape(size)


def complex_gaussian(rng: np.random.Generator, size) -> np.ndarray:
    """Circular complex Gaussians with ``E|z|^2 = 1``."""
    g = gaussian(rng, (2, *np.atleast_1d(size)))
    return (g[0] + 1j * g[1]) / np.sqrt(2.0)


def random_psd(n: int, rng: SeedLike = 0) -> np.ndarray:
    """``X* X`` for an ``n x n`` complex Gaussian ``X``; exactly Hermitian."""
    if n < 1:
        raise DimensionMismatchError("n must be positive")
    gen = make_rng(rng)
    x = complex_gaussian(gen, (n, n))
    p = x.conj().T @ x
    return (p + p.conj().T) / 2


def random_unitary(n: int, rng: SeedLike = 0) -> np.ndarray:
    """Unitary Q factor of a complex Gaussian matrix, phase-corrected."""
    gen = make_rng(rng)
    q, r = np.linalg.qr(complex_gaussian(gen, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def complex_entry(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"complex entry must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"bad matrix entry {x!r}")
    return complex(float(x), 0.0)


def matrix_from_json(obj: dict) -> np.ndarray:
    """Parse ``{"rows": m, "cols": n, "entries": [[re, im], ...]}`` (row-major)."""
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if rows < 1 or cols < 1 or len(entries) != rows * cols:
        raise ValueError(f"matrix JSON has {len(entries)} entries for {rows}x{cols}")
    return as_matrix(np.array([complex_entry(e) for e in entries]).reshape(rows, cols))


def matrix_to_json(a) -> dict:
    m = as_matrix(a)
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(json.loads(Path(path).read_text()))
