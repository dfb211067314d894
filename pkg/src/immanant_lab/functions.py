"""Scalar matrix functionals: trace, determinant, permanent, immanants, p_r, e_r, s_r."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import core
from .core import determinant, trace
from .errors import (
    DegreeMismatchError,
    IndexOutOfRangeError,
    InvalidGroupError,
    NotSquareError,
    TooLargeError,
)
from .groups import (
    SN_ENUMERATION_MAX,
    CharacterFunction,
    PermutationGroup,
    load_character_table,
    sn_character,
    sn_irreducible,
    symmetric_group,
    verify_character,
)

PERMANENT_MAX = 14
_STREAM_CHUNK = 5040


def _square(a) -> np.ndarray:
    m = core.as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got {m.shape[0]}x{m.shape[1]}")
    return m


def hadamard_function(a) -> complex:
    """Product of the diagonal entries."""
    return complex(np.prod(np.diag(_square(a))))


def permanent(a) -> complex:
    """Permanent by Ryser's formula, visiting column subsets in Gray-code order.

    ``per(A) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij``; consecutive
    Gray codes differ in one column, so each row-sum update costs ``O(n)``.
    """
    m = _square(a)
    n = m.shape[0]
    if n > PERMANENT_MAX:
        raise TooLargeError(f"permanent limited to n <= {PERMANENT_MAX}")
    rowsums = np.zeros(n, dtype=np.complex128)
    in_set = [False] * n
    total = 0j
    size = 0
    for k in range(1, 2**n):
        j = (k & -k).bit_length() - 1
        if in_set[j]:
            rowsums -= m[:, j]
            size -= 1
        else:
            rowsums += m[:, j]
            size += 1
        in_set[j] = not in_set[j]
        term = complex(np.prod(rowsums))
        total += -term if size % 2 else term
    return complex((-1) ** n * total)


def immanant(a, group: PermutationGroup, chi: CharacterFunction) -> complex:
    """``sum_{sigma in G} chi(sigma) prod_i a[i, sigma(i)]`` summed literally over the group."""
    m = _square(a)
    n = m.shape[0]
    if group.degree != n:
        raise DegreeMismatchError(f"group of degree {group.degree} applied to a {n}x{n} matrix")
    if chi.group is not group:
        raise DegreeMismatchError("character belongs to a different group")
    perms = group.image_array
    terms = m[np.arange(n)[None, :], perms].prod(axis=1)
    return complex(np.sum(chi.values * terms))


def sn_immanant(a, lam: Sequence[int]) -> complex:
    """Immanant for ``chi^lam`` of the full S_n, streaming permutations instead of storing the group."""
    m = _square(a)
    n = m.shape[0]
    if sum(lam) != n:
        raise DegreeMismatchError(f"partition of {sum(lam)} applied to a {n}x{n} matrix")
    rows = np.arange(n)[None, :]
    cache: dict[tuple[int, ...], int] = {}
    total = 0j
    stream = itertools.permutations(range(n))
    while True:
        chunk = list(itertools.islice(stream, _STREAM_CHUNK))
        if not chunk:
            break
        perms = np.array(chunk, dtype=np.intp)
        chis = np.empty(len(chunk))
        for i, p in enumerate(chunk):
            ct = _cycle_type_tuple(p)
            if ct not in cache:
                cache[ct] = sn_character(lam, ct)
            chis[i] = cache[ct]
        total += np.sum(chis * m[rows, perms].prod(axis=1))
    return complex(total)


def _cycle_type_tuple(p: tuple[int, ...]) -> tuple[int, ...]:
    seen = [False] * len(p)
    lengths = []
    for s in range(len(p)):
        if seen[s]:
            continue
        k, i = 0, s
        while not seen[i]:
            seen[i] = True
            i = p[i]
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


# ---------------------------------------------------------------------------
# symmetric functions of the eigenvalues
# ---------------------------------------------------------------------------

def _power_traces(m: np.ndarray, r: int) -> list[complex]:
    out, power = [], np.eye(m.shape[0], dtype=np.complex128)
    for _ in range(r):
        power = power @ m
        out.append(complex(np.trace(power)))
    return out


def elementary_symmetric(a, r: int) -> complex:
    """``e_r`` of the eigenvalues of any square matrix, via Newton's identities."""
    m = _square(a)
    n = m.shape[0]
    if r < 1 or r > n:
        raise IndexOutOfRangeError(f"e_r needs 1 <= r <= {n}, got {r}")
    p = _power_traces(m, r)
    e = [1 + 0j]
    for k in range(1, r + 1):
        e.append(sum((-1) ** (i - 1) * e[k - i] * p[i - 1] for i in range(1, k + 1)) / k)
    return complex(e[r])


def complete_symmetric(a, r: int) -> complex:
    """``s_r`` (complete homogeneous) of the eigenvalues of any square matrix."""
    m = _square(a)
    if r < 1:
        raise IndexOutOfRangeError(f"s_r needs r >= 1, got {r}")
    p = _power_traces(m, r)
    h = [1 + 0j]
    for k in range(1, r + 1):
        h.append(sum(p[i - 1] * h[k - i] for i in range(1, k + 1)) / k)
    return complex(h[r])


def trace_power(a, r: int) -> complex:
    """``p_r(A) = (tr A)^r``."""
    if r < 1:
        raise IndexOutOfRangeError(f"p_r needs r >= 1, got {r}")
    return trace(a) ** r


def spectral_symmetric(a, kind: str, r: int) -> float:
    """``p_r``, ``e_r`` or ``s_r`` of a Hermitian matrix, computed from its eigenvalues."""
    lam = core.hermitian_eigenvalues(a)
    n = lam.size
    if r < 1 or (kind == "e" and r > n):
        raise IndexOutOfRangeError(f"index r={r} out of range for {kind}_r on n={n}")
    if kind == "p":
        return float(np.sum(lam) ** r)
    coeffs = np.zeros(r + 1)
    coeffs[0] = 1.0
    for x in lam:
        if kind == "e":
            # multiply by (1 + x t)
            coeffs[1:] = coeffs[1:] + x * coeffs[:-1]
        elif kind == "s":
            # multiply by 1 / (1 - x t)
            for k in range(1, r + 1):
                coeffs[k] += x * coeffs[k - 1]
        else:
            raise ValueError(f"unknown spectral kind {kind!r}")
    return float(coeffs[r])


# ---------------------------------------------------------------------------
# uniform dispatch
# ---------------------------------------------------------------------------

KINDS = ("trace", "determinant", "permanent", "immanant", "p", "e", "s")


@dataclass(frozen=True, eq=False)
class MatrixFunctional:
    """One of tr, det, per, an immanant d_chi^G, p_r, e_r or s_r."""

    kind: str
    r: int | None = None
    group: PermutationGroup | None = None
    character: CharacterFunction | None = None
    partition: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown functional kind {self.kind!r}")
        if self.kind in ("p", "e", "s"):
            if self.r is None or self.r < 1:
                raise IndexOutOfRangeError(f"{self.kind}_r needs r >= 1")
        if self.kind == "immanant":
            if self.partition is None:
                if self.group is None or self.character is None:
                    raise ValueError("immanant needs a group and a character, or a partition")
                if self.character.group is not self.group:
                    raise DegreeMismatchError("character belongs to a different group")
                if not verify_character(self.character):
                    raise InvalidGroupError("character is not irreducible (<chi, chi> != 1 or not a class function)")

    @classmethod
    def immanant_of(cls, group: PermutationGroup, character: CharacterFunction) -> "MatrixFunctional":
        return cls("immanant", group=group, character=character)

    @classmethod
    def sn(cls, lam: Sequence[int]) -> "MatrixFunctional":
        """Immanant of the full symmetric group with the Murnaghan-Nakayama character ``chi^lam``."""
        lam = tuple(int(x) for x in lam)
        sn_character(lam, (1,) * sum(lam))
        if sum(lam) <= SN_ENUMERATION_MAX:
            group, chi = _sn_pair(lam)
            return cls("immanant", group=group, character=chi, partition=lam)
        return cls("immanant", partition=lam)

    @property
    def degree(self) -> int | None:
        """The matrix size an immanant applies to (``None`` for size-agnostic kinds)."""
        if self.kind != "immanant":
            return None
        return sum(self.partition) if self.partition is not None else self.group.degree

    @property
    def label(self) -> str:
        if self.kind in ("p", "e", "s"):
            return f"{self.kind}_{self.r}"
        if self.kind == "immanant":
            if self.partition is not None:
                return "imm[S_%d,%s]" % (sum(self.partition), ",".join(map(str, self.partition)))
            return f"imm[G{self.group.order},{self.character.name}]"
        return {"trace": "tr", "determinant": "det", "permanent": "per"}[self.kind]

    def __call__(self, a) -> complex:
        return apply_functional(self, a)

    def __repr__(self) -> str:
        return f"MatrixFunctional({self.label})"


def apply_functional(f: MatrixFunctional, a) -> complex:
    """Evaluate ``f`` on a square matrix.

    The spectral kinds use trace/Newton forms that are valid for non-Hermitian
    inputs too, since off-diagonal blocks of a block matrix are not Hermitian.
    """
    m = _square(a)
    if f.kind == "trace":
        return trace(m)
    if f.kind == "determinant":
        return determinant(m)
    if f.kind == "permanent":
        return permanent(m)
    if f.kind == "p":
        return trace_power(m, f.r)
    if f.kind == "e":
        return elementary_symmetric(m, f.r)
    if f.kind == "s":
        return complete_symmetric(m, f.r)
    if f.partition is not None:
        if f.group is not None and f.group.degree == m.shape[0]:
            return immanant(m, f.group, f.character)
        return sn_immanant(m, f.partition)
    return immanant(m, f.group, f.character)


def parse_functional(text: str, base_dir: str | Path | None = None) -> MatrixFunctional:
    """Parse ``tr | det | per | imm:<char-table-file> | p:<r> | e:<r> | s:<r>``."""
    text = text.strip()
    simple = {"tr": "trace", "det": "determinant", "per": "permanent"}
    if text in simple:
        return MatrixFunctional(simple[text])
    head, sep, arg = text.partition(":")
    if not sep or not arg:
        raise ValueError(f"cannot parse functional {text!r}")
    if head in ("p", "e", "s"):
        try:
            r = int(arg)
        except ValueError:
            raise ValueError(f"bad index in {text!r}") from None
        return MatrixFunctional(head, r=r)
    if head == "imm":
        path = Path(arg)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        table = load_character_table(path)
        if table.character is None:
            return MatrixFunctional("immanant", partition=table.partition)
        return MatrixFunctional("immanant", group=table.group, character=table.character,
                                partition=table.partition)
    raise ValueError(f"cannot parse functional {text!r}")


def default_immanant(n: int) -> MatrixFunctional:
    """The S_n immanant for the standard character ``chi^(n-1,1)`` (sign when n = 2, trivial when n = 1)."""
    lam = (n - 1, 1) if n >= 3 else ((1, 1) if n == 2 else (1,))
    return MatrixFunctional.sn(lam)


def all_functionals(n: int, r: int = 2) -> list[MatrixFunctional]:
    """The seven functional families with index ``r`` (``e_r`` capped at ``n``)."""
    return [
        MatrixFunctional("trace"),
        MatrixFunctional("determinant"),
        MatrixFunctional("permanent"),
        default_immanant(n),
        MatrixFunctional("p", r=r),
        MatrixFunctional("e", r=min(r, n)),
        MatrixFunctional("s", r=r),
    ]


@functools.lru_cache(maxsize=None)
def _sn_pair(lam: tuple[int, ...]):
    group = symmetric_group(sum(lam))
    return group, sn_irreducible(group, lam)
