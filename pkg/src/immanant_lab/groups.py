"""Permutations, permutation groups generated by closure, and characters.

Permutations are 0-indexed internally (one-line notation ``images[i] = p(i)``)
and composition follows ``(p * q)(i) = p(q(i))``.  The 1-indexed form is only
used at the I/O boundary (:func:`Permutation.from_one_line` and JSON tables).
"""

from __future__ import annotations

import cmath
import functools
import itertools
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegreeMismatchError,
    GroupTooLargeError,
    InvalidGroupError,
    NotSamePartitionSizeError,
    TooLargeError,
)

GROUP_CAP = 10080
SN_MAX_DEGREE = 8
SN_ENUMERATION_MAX = 7


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise InvalidGroupError(f"{imgs} is not a permutation of 0..{len(imgs) - 1}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        """Build from 0-indexed cycles, e.g. ``from_cycles(3, (0, 1, 2))``."""
        imgs = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                if not 0 <= a < n:
                    raise DegreeMismatchError(f"point {a} outside degree {n}")
                imgs[a] = b
        return cls(tuple(imgs))

    @classmethod
    def from_one_line(cls, images: Sequence[int]) -> "Permutation":
        """Build from 1-indexed one-line notation."""
        return cls(tuple(int(i) - 1 for i in images))

    def one_line(self) -> list[int]:
        return [i + 1 for i in self.images]

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise DegreeMismatchError(f"degrees {self.degree} and {other.degree} differ")
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return cycle_type(self)

    def sign(self) -> int:
        return -1 if (self.degree - len(self.cycles())) % 2 else 1

    def __repr__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "e"
        return f"Permutation<{body}; n={self.degree}>"


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths of ``p``, weakly decreasing, summing to the degree."""
    return tuple(sorted((len(c) for c in p.cycles()), reverse=True))


def partitions(n: int) -> list[tuple[int, ...]]:
    """All partitions of ``n`` in reverse lexicographic order, ``(n)`` first."""
    out: list[tuple[int, ...]] = []

    def rec(rest: int, cap: int, prefix: tuple[int, ...]):
        if rest == 0:
            out.append(prefix)
            return
        for part in range(min(rest, cap), 0, -1):
            rec(rest - part, part, prefix + (part,))

    rec(n, n, ())
    return out


def class_size(mu: Sequence[int]) -> int:
    """Number of permutations of cycle type ``mu`` in S_n."""
    n = sum(mu)
    z = 1
    for k, mult in _multiplicities(mu).items():
        z *= k**mult * math.factorial(mult)
    return math.factorial(n) // z


def _multiplicities(mu: Sequence[int]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for k in mu:
        counts[k] = counts.get(k, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

class PermutationGroup:
    """A finite group of permutations of ``{0, ..., degree - 1}``.

    ``elements[0]`` is always the identity.  Groups are immutable once built.
    """

    def __init__(self, degree: int, elements: Iterable[Permutation],
                 generators: Sequence[Permutation] | None = None, *, check: bool = True):
        self.degree = int(degree)
        elems = tuple(elements)
        if len(elems) > GROUP_CAP:
            raise GroupTooLargeError(f"group of order {len(elems)} exceeds cap {GROUP_CAP}")
        for g in elems:
            if g.degree != self.degree:
                raise DegreeMismatchError(f"element of degree {g.degree} in a degree-{self.degree} group")
        ident = Permutation.identity(self.degree)
        if not elems or elems[0] != ident:
            raise InvalidGroupError("first element must be the identity")
        self.elements = elems
        self._index = {g.images: i for i, g in enumerate(elems)}
        if len(self._index) != len(elems):
            raise InvalidGroupError("duplicate elements")
        self.generators = tuple(generators) if generators is not None else elems[1:]
        self._array = np.array([g.images for g in elems], dtype=np.intp).reshape(len(elems), self.degree)
        if check:
            self._check_closure()

    def _check_closure(self) -> None:
        # a finite subset closed under products is a subgroup
        arr = self._array
        codes = set(self._encode(arr).tolist())
        for g in arr:
            prods = g[arr]  # g o h for every h
            if not codes.issuperset(self._encode(prods).tolist()):
                raise InvalidGroupError("elements are not closed under composition")

    def _encode(self, arr: np.ndarray) -> np.ndarray:
        weights = self.degree ** np.arange(self.degree, dtype=np.int64)
        return arr.astype(np.int64) @ weights

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p.images in self._index

    def index(self, p: Permutation) -> int:
        try:
            return self._index[p.images]
        except KeyError:
            raise InvalidGroupError(f"{p!r} is not in the group") from None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def image_array(self) -> np.ndarray:
        """``(|G|, degree)`` array of one-line images, in element order."""
        return self._array

    def is_symmetric_group(self) -> bool:
        return self.order == math.factorial(self.degree)

    def conjugation_table(self, by: Sequence[Permutation] | None = None) -> np.ndarray:
        """``table[k, i]`` = index of ``t_k g_i t_k^-1`` for each conjugator ``t_k``."""
        by = self.generators if by is None else by
        out = np.empty((len(by), self.order), dtype=np.intp)
        for k, t in enumerate(by):
            tinv = t.inverse()
            for i, g in enumerate(self.elements):
                out[k, i] = self.index(t * g * tinv)
        return out

    def __repr__(self) -> str:
        return f"PermutationGroup(degree={self.degree}, order={self.order})"


def group_from_generators(degree: int, generators: Sequence[Permutation]) -> PermutationGroup:
    """Closure of ``generators``: breadth-first from the identity, each level sorted lexicographically."""
    gens = sorted(set(generators))
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatchError(f"generator of degree {g.degree}, expected {degree}")
    ident = Permutation.identity(degree)
    seen = {ident.images}
    order = [ident]
    level = [ident]
    while level:
        fresh = set()
        for g in level:
            for s in gens:
                h = g * s
                if h.images not in seen:
                    seen.add(h.images)
                    fresh.add(h)
                    if len(seen) > GROUP_CAP:
                        raise GroupTooLargeError(f"closure exceeds {GROUP_CAP} elements")
        level = sorted(fresh)
        order.extend(level)
    # closure under right multiplication by generators makes this a group already
    return PermutationGroup(degree, order, generators=gens, check=False)


def symmetric_group(n: int) -> PermutationGroup:
    if n > SN_ENUMERATION_MAX:
        raise GroupTooLargeError(f"S_{n} is not enumerated beyond n={SN_ENUMERATION_MAX}")
    gens = []
    if n >= 2:
        gens.append(Permutation.from_cycles(n, (0, 1)))
    if n >= 3:
        gens.append(Permutation.from_cycles(n, tuple(range(n))))
    return group_from_generators(n, gens)


def trivial_group(n: int) -> PermutationGroup:
    return PermutationGroup(n, [Permutation.identity(n)], generators=[])


def cyclic_group(n: int) -> PermutationGroup:
    """The cyclic group generated by the full cycle ``(0 1 ... n-1)``."""
    if n == 1:
        return trivial_group(1)
    return group_from_generators(n, [Permutation.from_cycles(n, tuple(range(n)))])


# ---------------------------------------------------------------------------
# Murnaghan-Nakayama
# ---------------------------------------------------------------------------

def _check_partition(lam: Sequence[int]) -> tuple[int, ...]:
    lam = tuple(int(x) for x in lam)
    if any(x <= 0 for x in lam) or any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"{lam} is not a partition (positive, weakly decreasing)")
    return lam


def sn_character(lam: Sequence[int], mu: Sequence[int]) -> int:
    """Irreducible character of S_n indexed by ``lam`` at a permutation of cycle type ``mu``.

    Border strips are removed on the beta-set (abacus) of ``lam``: a strip of
    length ``k`` moves one bead from ``b`` to ``b - k`` and contributes the
    sign ``(-1)^(beads passed over)``.
    """
    lam = _check_partition(lam)
    mu = tuple(sorted((int(x) for x in mu), reverse=True))
    if any(x <= 0 for x in mu):
        raise ValueError(f"{mu} is not a cycle type")
    if sum(lam) != sum(mu):
        raise NotSamePartitionSizeError(f"|lambda| = {sum(lam)} but |mu| = {sum(mu)}")
    if sum(lam) > SN_MAX_DEGREE:
        raise TooLargeError(f"built-in S_n characters are limited to n <= {SN_MAX_DEGREE}")
    ell = len(lam)
    beta = frozenset(lam[i] + (ell - 1 - i) for i in range(ell))
    return _mn(beta, mu)


@functools.lru_cache(maxsize=None)
def _mn(beta: frozenset, mu: tuple[int, ...]) -> int:
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    total = 0
    for b in beta:
        target = b - k
        if target < 0 or target in beta:
            continue
        passed = sum(1 for x in beta if target < x < b)
        total += (-1) ** passed * _mn((beta - {b}) | {target}, rest)
    return total


def sn_degree(lam: Sequence[int]) -> int:
    return sn_character(lam, (1,) * sum(lam))


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CharacterFunction:
    """A class function on ``group``; ``values[i]`` is the value at ``group.elements[i]``."""

    group: PermutationGroup
    values: np.ndarray
    name: str = field(default="chi")

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128).ravel()
        if vals.shape != (self.group.order,):
            raise DegreeMismatchError(f"{vals.size} values for a group of order {self.group.order}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def degree(self) -> float:
        return float(self.values[0].real)

    def __call__(self, p: Permutation) -> complex:
        return complex(self.values[self.group.index(p)])

    def __add__(self, other: "CharacterFunction") -> "CharacterFunction":
        if other.group is not self.group:
            raise DegreeMismatchError("characters live on different groups")
        return CharacterFunction(self.group, self.values + other.values, f"{self.name}+{other.name}")

    def inner(self, other: "CharacterFunction") -> complex:
        return complex(np.vdot(other.values, self.values) / self.group.order)

    def is_class_function(self, tol: float = 1e-12) -> bool:
        table = self.group.conjugation_table()
        return bool(np.all(np.abs(self.values[table] - self.values[None, :]) <= tol))


def trivial_character(group: PermutationGroup) -> CharacterFunction:
    return CharacterFunction(group, np.ones(group.order), "trivial")


def sign_character(group: PermutationGroup) -> CharacterFunction:
    return CharacterFunction(group, [g.sign() for g in group], "sign")


def sn_irreducible(group: PermutationGroup, lam: Sequence[int]) -> CharacterFunction:
    """The Murnaghan-Nakayama character ``chi^lam`` on a full symmetric group."""
    if not group.is_symmetric_group():
        raise InvalidGroupError("built-in irreducibles need the full symmetric group")
    lam = _check_partition(lam)
    if sum(lam) != group.degree:
        raise NotSamePartitionSizeError(f"partition of {sum(lam)} on S_{group.degree}")
    vals = [sn_character(lam, cycle_type(g)) for g in group]
    return CharacterFunction(group, vals, "chi" + str(lam))


def cyclic_character(group: PermutationGroup, k: int) -> CharacterFunction:
    """``chi_k(g^j) = exp(2 pi i j k / |G|)`` for a cyclic group with generator ``g``."""
    n = group.order
    gen = None
    for g in group.elements:
        if _order(g) == n:
            gen = g
            break
    if gen is None:
        raise InvalidGroupError("group is not cyclic")
    vals = np.empty(n, dtype=np.complex128)
    p = Permutation.identity(group.degree)
    for j in range(n):
        vals[group.index(p)] = cmath.exp(2j * math.pi * j * k / n)
        p = p * gen
    return CharacterFunction(group, vals, f"cyclic{k}")


def _order(p: Permutation) -> int:
    return math.lcm(*(len(c) for c in p.cycles()))


def verify_character(chi: CharacterFunction, tol: float = 1e-9) -> bool:
    """True iff ``<chi, chi> = 1`` within ``tol`` and ``chi`` is constant on conjugacy classes."""
    norm = chi.inner(chi)
    if abs(norm - 1.0) > tol:
        return False
    return chi.is_class_function(tol)


# ---------------------------------------------------------------------------
# JSON character tables
# ---------------------------------------------------------------------------

def _ints(key: str) -> tuple[int, ...]:
    found = re.findall(r"-?\d+", key)
    if not found:
        raise ValueError(f"cannot read integers from {key!r}")
    return tuple(int(x) for x in found)


def _value(v) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise ValueError(f"bad character value {v!r}")


@dataclass(frozen=True)
class CharacterTable:
    """A parsed character-table file.

    ``partition`` is set instead of ``character`` when the table names a
    Murnaghan-Nakayama character of the full symmetric group, which allows
    degree 8 without enumerating the group.
    """

    degree: int
    group: PermutationGroup | None
    character: CharacterFunction | None
    partition: tuple[int, ...] | None = None


def character_table_from_json(obj: dict) -> CharacterTable:
    """Parse ``{"degree": n, "generators": [...], "character": {"by": ..., "values": ...}}``.

    Generators are 1-indexed one-line permutations.  ``by`` is ``"cycle_type"``
    or ``"element"`` (keys are integer lists such as ``"2,1"`` or ``"2 1 3"``),
    or ``"partition"`` with ``values`` a partition of ``degree``; the latter
    ignores ``generators`` and means the full symmetric group.
    """
    try:
        n = int(obj["degree"])
        spec = obj["character"]
        by = spec["by"]
        values = spec["values"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed character table: {exc}") from exc

    if by == "partition":
        lam = _check_partition(values)
        if sum(lam) != n:
            raise NotSamePartitionSizeError(f"partition of {sum(lam)} for degree {n}")
        if n <= SN_ENUMERATION_MAX:
            g = symmetric_group(n)
            return CharacterTable(n, g, sn_irreducible(g, lam), lam)
        sn_character(lam, (1,) * n)  # validates the size cap
        return CharacterTable(n, None, None, lam)

    gens = [Permutation.from_one_line(p) for p in obj.get("generators", [])]
    group = group_from_generators(n, gens)
    vals = np.empty(group.order, dtype=np.complex128)
    if by == "cycle_type":
        table = {tuple(sorted(_ints(k), reverse=True)): _value(v) for k, v in values.items()}
        for i, g in enumerate(group):
            ct = cycle_type(g)
            if ct not in table:
                raise ValueError(f"no character value for cycle type {ct}")
            vals[i] = table[ct]
    elif by == "element":
        table = {Permutation.from_one_line(_ints(k)).images: _value(v) for k, v in values.items()}
        for i, g in enumerate(group):
            if g.images not in table:
                raise ValueError(f"no character value for element {g.one_line()}")
            vals[i] = table[g.images]
    else:
        raise ValueError(f"unknown character key type {by!r}")
    return CharacterTable(n, group, CharacterFunction(group, vals, "table"))


def load_character_table(path) -> CharacterTable:
    return character_table_from_json(json.loads(Path(path).read_text()))


def iter_symmetric_group(n: int):
    """Stream every permutation of S_n as a tuple, lexicographically, without storing the group."""
    return itertools.permutations(range(n))
