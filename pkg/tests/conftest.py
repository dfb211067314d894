"""Independent brute-force oracles shared by the test modules."""

import itertools
import math

import numpy as np
import pytest


def inversion_sign(p) -> int:
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inv % 2 else 1


def brute_det(a) -> complex:
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    return sum(inversion_sign(p) * np.prod([a[i, p[i]] for i in range(n)])
               for p in itertools.permutations(range(n)))


def brute_per(a) -> complex:
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    return sum(np.prod([a[i, p[i]] for i in range(n)]) for p in itertools.permutations(range(n)))


def brute_e(values, r):
    return sum(math.prod(c) for c in itertools.combinations(values, r))


def brute_s(values, r):
    return sum(math.prod(c) for c in itertools.combinations_with_replacement(values, r))


def rel_err(x, y) -> float:
    return abs(x - y) / max(1.0, abs(x), abs(y))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def cgauss(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def hermitian(rng, n):
    x = cgauss(rng, n, n)
    return x + x.conj().T


def psd(rng, n):
    x = cgauss(rng, n, n)
    return x.conj().T @ x
