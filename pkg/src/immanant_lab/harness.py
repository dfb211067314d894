"""Randomized verification of the superadditivity-type inequalities.

Each :class:`InequalityCase` maps a tuple of PSD inputs to a margin: the
scalar ``LHS - RHS`` for scalar cases, or the smallest eigenvalue of
``LHS - RHS`` for Loewner-order cases.  A trial passes iff
``margin >= -tol * (1 + max input Frobenius norm)``.

Trial ``t`` of a case draws its inputs from ``make_rng(seed, case_salt, t)``,
so any failure can be replayed from ``(seed, case key, t)`` alone.
"""

from __future__ import annotations

import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import core
from .blocks import BlockMatrix, partial_function_1, partial_function_2
from .core import frobenius
from .errors import DimensionMismatchError, NotHermitianError
from .functions import MatrixFunctional, all_functionals, apply_functional, default_immanant
from .multilinear import POWER_KINDS, PowerKind, power

DEFAULT_TOL = 1e-8

SCALAR_CASES = ("EEQ0", "EEQ1", "EEQ2", "EEQ3", "SCALAR_DET_3TERM", "SCALAR_DET_COR")
BLOCK_CASES = ("EQLS", "THM35_G1", "THM35_G2", "COR36_G1", "COR36_G2")
MATRIX_CASES = ("LEM32",)
CASE_IDS = SCALAR_CASES + BLOCK_CASES + MATRIX_CASES
_ARITY2 = {"EEQ0", "EEQ1", "EQLS"}
_FIXED_FUNCTIONAL = {
    "EEQ0": "determinant",
    "SCALAR_DET_3TERM": "determinant",
    "SCALAR_DET_COR": "determinant",
    "EQLS": "determinant",
}


@dataclass(frozen=True, eq=False)
class InequalityCase:
    id: str
    functional: MatrixFunctional | None = None
    power_kind: PowerKind | None = None
    r: int = 2

    def __post_init__(self):
        if self.id not in CASE_IDS:
            raise ValueError(f"unknown case id {self.id!r}")
        if self.id in _FIXED_FUNCTIONAL and self.functional is None:
            object.__setattr__(self, "functional", MatrixFunctional(_FIXED_FUNCTIONAL[self.id]))
        if self.id == "LEM32":
            if self.power_kind not in POWER_KINDS:
                raise ValueError("LEM32 needs power_kind in tensor/wedge/vee")
        elif self.functional is None and self.id not in ("EEQ1", "EEQ2", "EEQ3"):
            raise ValueError(f"{self.id} needs a functional")

    @property
    def arity(self) -> int:
        return 2 if self.id in _ARITY2 else 3

    @property
    def ambient(self) -> str:
        if self.id in SCALAR_CASES:
            return "scalar"
        if self.id in BLOCK_CASES:
            return "block"
        return "matrix"

    def functional_for(self, size: int) -> MatrixFunctional:
        return self.functional if self.functional is not None else default_immanant(size)

    @property
    def key(self) -> str:
        if self.id == "LEM32":
            return f"LEM32[{self.power_kind},r={self.r}]"
        label = self.functional.label if self.functional is not None else "imm[default]"
        return f"{self.id}[{label}]"


@dataclass
class TrialReport:
    case: InequalityCase
    trials: int
    failures: int
    worst_margin: float | None
    seed: int
    elapsed: float = 0.0
    failing_trials: list[int] = field(default_factory=list)
    worst_scaled: float | None = None

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "id": self.case.id,
            "case": self.case.key,
            "functional": self.case.functional.label if self.case.functional is not None else None,
            "trials": self.trials,
            "failures": self.failures,
            "worst_margin": self.worst_margin,
            "worst_scaled_margin": self.worst_scaled,
            "seed": self.seed,
            "failing_trials": list(self.failing_trials),
        }
        if timing:
            out["elapsed"] = self.elapsed
        return out


# ---------------------------------------------------------------------------
# margins
# ---------------------------------------------------------------------------

def _real(z: complex) -> float:
    return float(np.real(z))


def _min_eig(diff: np.ndarray, scale: float) -> float:
    asym = float(np.max(np.abs(diff - diff.conj().T)))
    if asym > 1e-8 * (1.0 + scale):
        raise NotHermitianError(f"difference matrix is not Hermitian (asymmetry {asym:.2e})")
    return float(core.hermitian_eigenvalues((diff + diff.conj().T) / 2)[0])


def _three_term(g, a, b, c):
    """``g(A+B+C) + g(A) + g(B) + g(C) - g(A+B) - g(A+C) - g(B+C)`` and its largest term."""
    top = g(a + b + c)
    return top + g(a) + g(b) + g(c) - g(a + b) - g(a + c) - g(b + c), top


def _two_term_cor(g, a, b, c):
    """``g(A+B+C) + g(C) - g(A+C) - g(B+C)``."""
    top = g(a + b + c)
    return top + g(c) - g(a + c) - g(b + c), top


def check_case(case: InequalityCase, instance: Sequence) -> float:
    """Margin of ``case`` on ``instance`` (matrices, or BlockMatrix objects for block cases)."""
    if len(instance) != case.arity:
        raise DimensionMismatchError(f"{case.id} takes {case.arity} inputs, got {len(instance)}")

    if case.ambient == "block":
        blocks = [x if isinstance(x, BlockMatrix) else None for x in instance]
        if any(x is None for x in blocks):
            raise DimensionMismatchError(f"{case.id} needs BlockMatrix inputs")
        if len({x.blocks.shape for x in blocks}) != 1:
            raise DimensionMismatchError("block inputs differ in shape")
        if case.id.endswith("G1"):
            f = case.functional_for(blocks[0].m)

            def g(x):
                return partial_function_1(f, x)
        else:
            f = case.functional_for(blocks[0].n)

            def g(x):
                return partial_function_2(f, x)
        if case.id == "EQLS":
            a, b = blocks
            top = g(a + b)
            diff = top - g(a) - g(b)
        elif case.id.startswith("THM35"):
            diff, top = _three_term(g, *blocks)
        else:
            diff, top = _two_term_cor(g, *blocks)
        return _min_eig(diff, frobenius(top))

    mats = [core.as_matrix(x) for x in instance]
    if len({x.shape for x in mats}) != 1 or mats[0].shape[0] != mats[0].shape[1]:
        raise DimensionMismatchError("inputs must be square matrices of one size")

    if case.ambient == "matrix":
        def p(x):
            return power(x, case.r, case.power_kind)
        diff, top = _three_term(p, *mats)
        return _min_eig(diff, frobenius(top))

    f = case.functional_for(mats[0].shape[0])

    def d(x):
        return _real(apply_functional(f, x))

    if case.id in ("EEQ0", "EEQ1"):
        a, b = mats
        return d(a + b) - d(a) - d(b)
    if case.id in ("EEQ3", "SCALAR_DET_3TERM"):
        return _three_term(d, *mats)[0]
    return _two_term_cor(d, *mats)[0]


def case_scale(instance: Sequence) -> float:
    return max(frobenius(x.flatten() if isinstance(x, BlockMatrix) else x) for x in instance)


def passes(margin: float, instance: Sequence, tol: float = DEFAULT_TOL) -> bool:
    return margin >= -tol * (1.0 + case_scale(instance))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def case_salt(case: InequalityCase) -> int:
    return zlib.crc32(case.key.encode())


def sample_instance(case: InequalityCase, m: int, n: int, rng) -> list:
    if case.ambient == "block":
        return [BlockMatrix.from_flat(core.random_psd(m * n, rng), m, n) for _ in range(case.arity)]
    return [core.random_psd(n, rng) for _ in range(case.arity)]


def replay(case: InequalityCase, m: int, n: int, seed: int, trial: int) -> list:
    """Regenerate the inputs of one trial."""
    return sample_instance(case, m, n, core.make_rng(seed, case_salt(case), trial))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("IMMANANT_LAB_THREADS", "1")))
    except ValueError:
        return 1


def run_case(case: InequalityCase, trials: int, m: int, n: int,
             tol: float = DEFAULT_TOL, seed: int = 0) -> TrialReport:
    start = time.perf_counter()
    salt = case_salt(case)

    def one(t: int) -> tuple[float, float]:
        inst = sample_instance(case, m, n, core.make_rng(seed, salt, t))
        margin = check_case(case, inst)
        return margin, margin / (1.0 + case_scale(inst))

    workers = _threads()
    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(t) for t in range(trials)]

    failing = [t for t, (_, scaled) in enumerate(results) if scaled < -tol]
    worst = min((mg for mg, _ in results), default=None)
    worst_scaled = min((s for _, s in results), default=None)
    return TrialReport(case, trials, len(failing), worst, seed,
                       time.perf_counter() - start, failing, worst_scaled)


def run_suite(cases: Sequence[InequalityCase], trials: int, m: int, n: int,
              tol: float = DEFAULT_TOL, seed: int = 0) -> list[TrialReport]:
    """Run every case for ``trials`` independent PSD instances; deterministic given ``seed``."""
    if trials < 0:
        raise ValueError("trials must be non-negative")
    return [run_case(c, trials, m, n, tol, seed) for c in cases]


def default_cases(m: int, n: int, r: int = 2, ids: Sequence[str] | None = None) -> list[InequalityCase]:
    """The default sweep: all seven functionals for the block theorems, det/per/immanant for the scalar chains."""
    wanted = set(CASE_IDS if ids is None else ids)
    unknown = wanted - set(CASE_IDS)
    if unknown:
        raise ValueError(f"unknown case ids: {sorted(unknown)}")
    cases: list[InequalityCase] = []
    for cid in CASE_IDS:
        if cid not in wanted:
            continue
        if cid in ("THM35_G1", "COR36_G1"):
            cases += [InequalityCase(cid, f) for f in all_functionals(m, r)]
        elif cid in ("THM35_G2", "COR36_G2"):
            cases += [InequalityCase(cid, f) for f in all_functionals(n, r)]
        elif cid in ("EEQ1", "EEQ2", "EEQ3"):
            cases += [InequalityCase(cid, MatrixFunctional(k)) for k in ("determinant", "permanent")]
            cases.append(InequalityCase(cid, default_immanant(n)))
        elif cid == "LEM32":
            cases += [InequalityCase(cid, power_kind=k, r=r) for k in POWER_KINDS]
        else:
            cases.append(InequalityCase(cid))
    return cases
