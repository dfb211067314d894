"""Inner-product geometry: Gram-type 3x3 positivity, Dragomir's bound, angle inequalities.

The inner product is linear in the first argument: ``<x, y> = sum conj(y_i) x_i``.

Angles are evaluated with the half-angle form
``2 * atan2(|x - y|, |x + y|)`` on unit vectors, which equals the arccos
definition exactly but stays accurate when the cosine is close to 1; the
arccos forms are kept as cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import core
from .core import LoewnerVerdict, is_psd
from .errors import (
    DimensionMismatchError,
    NonFiniteError,
    NotHermitianError,
    NotPsdInputError,
    NotUnitError,
    ZeroVectorError,
)

ARCCOS_OVERSHOOT = 1e-12


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.complex128).ravel()
    if v.size == 0:
        raise DimensionMismatchError("empty vector")
    # a finite sum means finite entries (NaN and Inf both propagate)
    if not np.isfinite(v.sum()):
        raise NonFiniteError("vector has NaN or Inf entries")
    return v


def _same_dim(*vs) -> list[np.ndarray]:
    out = [as_vector(v) for v in vs]
    if len({v.size for v in out}) != 1:
        raise DimensionMismatchError(f"vector dimensions differ: {[v.size for v in out]}")
    return out


def vector_from_json(obj: dict) -> np.ndarray:
    """Parse ``{"entries": [[re, im], ...]}`` (bare numbers are read as real)."""
    try:
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed vector JSON: {exc}") from exc
    return as_vector([core.complex_entry(e) for e in entries])


def vector_to_json(v) -> dict:
    return {"entries": [[float(z.real), float(z.imag)] for z in as_vector(v)]}


def inner(u, v) -> complex:
    u, v = _same_dim(u, v)
    return complex(np.vdot(v, u))


def norm(u) -> float:
    return float(np.linalg.norm(as_vector(u)))


def _pairwise(vs: list[np.ndarray]) -> np.ndarray:
    # entry (i, j) = x_i^* x_j
    stacked = np.stack(vs, axis=1)
    return stacked.conj().T @ stacked


def gram_re(u, v, w) -> np.ndarray:
    """``[Re(x_i^* x_j)]`` for ``x = (u, v, w)``."""
    return _pairwise(_same_dim(u, v, w)).real.copy()


def abs_gram(u, v, w) -> np.ndarray:
    """``[|x_i^* x_j|]`` for ``x = (u, v, w)``."""
    return np.abs(_pairwise(_same_dim(u, v, w)))


def abs_psd_3x3(a, tol: float = 1e-9) -> LoewnerVerdict:
    """Verdict on the entrywise absolute value ``|A|`` of a 3x3 PSD matrix."""
    m = core.as_matrix(a)
    if m.shape != (3, 3):
        raise NotPsdInputError(f"only 3x3 inputs are covered, got {m.shape}")
    try:
        ok = is_psd(m, tol)
    except NotHermitianError as exc:
        raise NotPsdInputError(str(exc)) from exc
    if not ok:
        raise NotPsdInputError(f"input is not PSD (min eigenvalue {ok.min_eigenvalue:.3e})")
    return is_psd(np.abs(m), tol)


def signed_gram(u, w) -> np.ndarray:
    """For real ``u, w`` and ``v = u + w``: the Gram matrix with the ``u, w`` entries negated."""
    u, w = _same_dim(u, w)
    if np.any(u.imag != 0) or np.any(w.imag != 0):
        raise DimensionMismatchError("signed Gram matrix is defined for real vectors")
    u, w = u.real, w.real
    v = u + w
    return np.array([
        [u @ u, u @ v, -(u @ w)],
        [v @ u, v @ v, v @ w],
        [-(w @ u), w @ v, w @ w],
    ])


def signed_gram_check(u, w, tol: float = 1e-9) -> LoewnerVerdict:
    return is_psd(signed_gram(u, w), tol)


def triangle_cosines(u, w) -> tuple[float, float, float]:
    """Cosines of the interior angles of the triangle with sides ``u``, ``w``, ``v = u + w``.

    The angles sit between ``(u, v)``, ``(-u, w)`` and ``(-w, -v)``.  The
    signed Gram matrix is ``D R D`` with ``D = diag(|u|, |v|, |w|)`` and ``R``
    the unit-diagonal matrix of these cosines, so its determinant is
    ``4 (u.v)(-u.w)(v.w)``.  That is negative exactly when the triangle is
    obtuse, in which case the matrix is not PSD.
    """
    g = signed_gram(u, w)
    d = np.sqrt(np.diag(g))
    if np.any(d == 0):
        raise ZeroVectorError("triangle cosines need nonzero u, w and u + w")
    return g[0, 1] / (d[0] * d[1]), g[0, 2] / (d[0] * d[2]), g[1, 2] / (d[1] * d[2])


def signed_gram_determinant(u, w) -> float:
    """Closed form ``4 (u.v)(-u.w)(v.w)`` of ``det signed_gram(u, w)``."""
    g = signed_gram(u, w)
    return 4.0 * g[0, 1] * g[0, 2] * g[1, 2]


def dragomir_margin(u, v, w) -> float:
    """``(|u|^2|w|^2 - |<u,w>|^2)(|w|^2|v|^2 - |<w,v>|^2) - |<u,w><w,v> - <u,v><w,w>|^2``."""
    u, v, w = _same_dim(u, v, w)
    ww = float(np.vdot(w, w).real)
    if ww == 0.0:
        raise ZeroVectorError("w must be nonzero")
    uu, vv = float(np.vdot(u, u).real), float(np.vdot(v, v).real)
    uw, wv, uv = inner(u, w), inner(w, v), inner(u, v)
    lhs = (uu * ww - abs(uw) ** 2) * (ww * vv - abs(wv) ** 2)
    return lhs - abs(uw * wv - uv * ww) ** 2


def dragomir_scale(u, v, w) -> float:
    """Magnitude of the terms in :func:`dragomir_margin`: ``|u|^2 |v|^2 |w|^4``."""
    return norm(u) ** 2 * norm(v) ** 2 * norm(w) ** 4


def unit_triple_inequalities(u, v, w, unit_tol: float = 1e-10) -> tuple[float, float]:
    """Margins of ``1 + 2|a||b||c| >= |a|^2+|b|^2+|c|^2`` and of its ``2 Re(abc)`` form.

    Here ``a = <u,v>``, ``b = <v,w>``, ``c = <w,u>`` for unit vectors.
    """
    u, v, w = _same_dim(u, v, w)
    for name, x in zip("uvw", (u, v, w)):
        if abs(np.linalg.norm(x) - 1.0) > unit_tol:
            raise NotUnitError(f"{name} is not a unit vector")
    a, b, c = inner(u, v), inner(v, w), inner(w, u)
    squares = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2
    abs_form = 1 + 2 * abs(a) * abs(b) * abs(c) - squares
    re_form = 1 + 2 * (a * b * c).real - squares
    return abs_form, re_form


# ---------------------------------------------------------------------------
# angles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnglePair:
    phi: float
    psi: float

    def __post_init__(self):
        if not (0.0 <= self.phi <= math.pi and 0.0 <= self.psi <= math.pi / 2):
            raise ValueError(f"angles out of range: {self}")
        if self.psi > self.phi:
            raise ValueError(f"psi {self.psi} exceeds phi {self.phi}")


def _norm(x: np.ndarray) -> float:
    return math.sqrt(np.vdot(x, x).real)


def _unit(x: np.ndarray) -> np.ndarray:
    nx = _norm(x)
    if nx == 0.0:
        raise ZeroVectorError("angles need nonzero vectors")
    return x / nx


def _half_angle(x: np.ndarray, y: np.ndarray) -> float:
    return 2.0 * math.atan2(_norm(x - y), _norm(x + y))


def arccos_checked(x: float) -> float:
    """``arccos`` after confirming ``x`` leaves ``[-1, 1]`` by rounding only."""
    if abs(x) > 1.0 + ARCCOS_OVERSHOOT:
        raise ValueError(f"cosine {x} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, x)))


def phi_arccos(u, v) -> float:
    u, v = _same_dim(u, v)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVectorError("angles need nonzero vectors")
    return arccos_checked(inner(u, v).real / (nu * nv))


def psi_arccos(u, v) -> float:
    u, v = _same_dim(u, v)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVectorError("angles need nonzero vectors")
    return arccos_checked(abs(inner(u, v)) / (nu * nv))


def minimizing_phase(u, v) -> complex:
    """Unimodular ``p`` with ``Phi(p u, v) = Psi(u, v)``: ``conj(<u,v>) / |<u,v>|`` (1 when orthogonal)."""
    z = inner(u, v)
    return 1.0 + 0j if z == 0 else z.conjugate() / abs(z)


def angles(u, v, check: bool = True) -> AnglePair:
    """``Phi`` (from ``Re<u,v>``) and ``Psi`` (from ``|<u,v>|``), with ``Psi = Phi(p u, v)``."""
    u, v = _same_dim(u, v)
    uh, vh = _unit(u), _unit(v)
    p = minimizing_phase(uh, vh)
    phi = _half_angle(uh, vh)
    psi = min(_half_angle(p * uh, vh), math.pi / 2)
    if check:
        z = inner(uh, vh)
        if abs(math.cos(phi) - z.real) > 1e-12 or abs(math.cos(psi) - abs(z)) > 1e-12:
            raise ArithmeticError("angle evaluation disagrees with the arccos definition")
    # rounding can leave psi a hair above phi when <u,v> is real and positive
    return AnglePair(phi, min(psi, phi))


def triangle_checks(u, v, w) -> dict[str, float]:
    """Margins (non-negative when the inequality holds) of the angle inequalities for ``u, v, w``."""
    u, v, w = _same_dim(u, v, w)
    uv, uw, wv, vw = angles(u, v), angles(u, w), angles(w, v), angles(v, w)
    wu = angles(w, u)
    out: dict[str, float] = {}
    for fam in ("phi", "psi"):
        a_uv, a_uw, a_wv = getattr(uv, fam), getattr(uw, fam), getattr(wv, fam)
        a_vw, a_wu = getattr(vw, fam), getattr(wu, fam)
        out[f"triangle_{fam}"] = a_uw + a_wv - a_uv
        out[f"reverse_{fam}"] = a_uw - abs(a_uv - a_vw)
        out[f"upper_{fam}"] = a_uv + a_vw - a_uw
        out[f"two_pi_{fam}"] = 2 * math.pi - (a_uv + a_vw + a_wu)
        out[f"sin_{fam}"] = math.sin(a_uw) + math.sin(a_wv) - math.sin(a_uv)
    out["cos_chain_psi"] = math.cos(uv.psi) - math.cos(uw.psi + wv.psi)
    return out


# ---------------------------------------------------------------------------
# sampled suite
# ---------------------------------------------------------------------------

FAMILIES = ("generic", "real", "near_collinear", "near_orthogonal", "dragomir_equality")


def sample_triple(rng: np.random.Generator, family: str, dim: int, eps: float = 1e-6):
    """Three nonzero vectors of dimension ``dim`` from one of :data:`FAMILIES`."""

    def cg(*shape):
        return core.complex_gaussian(rng, shape)

    def phase():
        return complex(np.exp(2j * np.pi * rng.random()))

    if family == "generic":
        return cg(dim), cg(dim), cg(dim)
    if family == "real":
        g = core.gaussian(rng, (3, dim))
        return g[0] + 0j, g[1] + 0j, g[2] + 0j
    if family == "near_collinear":
        u = cg(dim)
        scale = np.linalg.norm(u)
        v = phase() * (u + eps * scale * cg(dim)) * (0.5 + rng.random())
        w = phase() * (u + eps * scale * cg(dim)) * (0.5 + rng.random())
        return u, v, w
    if family == "near_orthogonal":
        q, _ = np.linalg.qr(cg(dim, dim))
        cols = [q[:, k % dim] for k in range(3)]
        return tuple(c + eps * cg(dim) for c in cols)
    if family == "dragomir_equality":
        u = cg(dim)
        if rng.random() < 0.5 and dim >= 2:
            # u = v orthogonal to w
            w = cg(dim)
            w = w - (np.vdot(u, w) / np.vdot(u, u)) * u
            return u, u + eps * cg(dim), w
        # w in span{u}
        return u, cg(dim), phase() * u * (0.5 + rng.random()) + eps * cg(dim)
    raise ValueError(f"unknown family {family!r}")


@dataclass
class CheckTally:
    trials: int = 0
    failures: int = 0
    worst_margin: float | None = None
    failing_trials: list[int] | None = None

    def add(self, trial: int, margin: float, tol: float) -> None:
        self.trials += 1
        if self.worst_margin is None or margin < self.worst_margin:
            self.worst_margin = margin
        if margin < -tol:
            self.failures += 1
            if self.failing_trials is None:
                self.failing_trials = []
            self.failing_trials.append(trial)

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "failures": self.failures,
            "worst_margin": self.worst_margin,
            "failing_trials": self.failing_trials or [],
        }


GEOMETRY_SALT = 0x6E0


def geometry_trial(t: int, seed: int):
    """Dimension, family and vectors of trial ``t``."""
    rng = core.make_rng(seed, GEOMETRY_SALT, t)
    dim = 2 + t % 5
    family = FAMILIES[(t // 5) % len(FAMILIES)]
    return rng, dim, family, sample_triple(rng, family, dim)


def run_geometry_suite(trials: int, seed: int = 0, tol: float = 1e-8) -> dict[str, CheckTally]:
    """All geometry checks on ``trials`` sampled triples; margins are scale-free before comparison with ``-tol``."""
    tallies: dict[str, CheckTally] = {}

    def record(name: str, t: int, margin: float):
        tallies.setdefault(name, CheckTally()).add(t, margin, tol)

    def psd_margin(a) -> float:
        a = np.asarray(a)
        lam = float(core.hermitian_eigenvalues(a)[0])
        return lam / (1.0 + core.frobenius(a))

    for t in range(trials):
        rng, dim, family, (u, v, w) = geometry_trial(t, seed)

        record("gram_re_psd", t, psd_margin(gram_re(u, v, w)))
        record("abs_gram_psd", t, psd_margin(abs_gram(u, v, w)))
        ur, wr = u.real + 0j, w.real + 0j
        if np.linalg.norm(ur) > 0 and np.linalg.norm(wr) > 0:
            sg = signed_gram(ur, wr)
            record("signed_gram_psd", t, psd_margin(sg))
            # diagnostics locating the failures of the check above
            d2 = float(np.prod(np.diag(sg)))
            if d2 > 0:
                det_err = abs(core.determinant(sg).real - signed_gram_determinant(ur, wr)) / d2
                record("signed_gram_det_identity", t, -det_err)
                if min(triangle_cosines(ur, wr)) >= 0:
                    record("signed_gram_psd_nonobtuse", t, psd_margin(sg))

        a = core.random_psd(3, rng) if t % 2 else _pairwise([u, v, w])
        verdict = abs_psd_3x3(a, tol)
        record("abs_psd_3x3", t, verdict.min_eigenvalue / (1.0 + core.frobenius(a)))

        record("dragomir", t, dragomir_margin(u, v, w) / dragomir_scale(u, v, w))

        un, vn, wn = (x / np.linalg.norm(x) for x in (u, v, w))
        abs_form, re_form = unit_triple_inequalities(un, vn, wn)
        record("unit_triple_abs", t, abs_form)
        record("unit_triple_re", t, re_form)
        record("unit_triple_order", t, abs_form - re_form)

        pair = angles(u, v)
        record("psi_le_phi", t, pair.phi - pair.psi)
        for name, margin in triangle_checks(u, v, w).items():
            record(name, t, margin)
    return tallies
