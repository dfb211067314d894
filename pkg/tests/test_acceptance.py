"""Acceptance criteria 1-9, one test each; every test prints a PASS/FAIL line."""

import json
import time
from importlib import resources

import numpy as np
import pytest

from immanant_lab import cli, core
from immanant_lab.blocks import (
    BlockMatrix,
    block_tensor_power,
    partial_function_1,
    partial_function_2,
    principal_embedding_indices,
    reshuffle,
    search_principal_embedding,
)
from immanant_lab.core import determinant, hermitian_eigenvalues, is_psd, load_matrix
from immanant_lab.functions import all_functionals, complete_symmetric, elementary_symmetric, immanant
from immanant_lab.geometry import run_geometry_suite
from immanant_lab.groups import sn_irreducible, symmetric_group
from immanant_lab.harness import default_cases, run_suite
from immanant_lab.multilinear import (
    POWER_KINDS,
    classical_det_exponent,
    estimate_det_exponent,
    gmf_via_induced,
    power,
    printed_det_exponent,
    symmetrizer,
    tensor_power,
)

DATA = resources.files("immanant_lab") / "data"


@pytest.fixture
def report(capsys):
    def emit(k: int, ok: bool, title: str, detail: str = ""):
        with capsys.disabled():
            print(f"\nACCEPTANCE {k} {'PASS' if ok else 'FAIL'}: {title}" + (f" [{detail}]" if detail else ""))
        return ok
    return emit


def rel(x, y):
    return abs(x - y) / max(1.0, abs(x), abs(y))


def test_criterion_1_exact_reference_values(report):
    start = time.perf_counter()
    b, c = load_matrix(DATA / "B.json"), load_matrix(DATA / "C.json")
    det_b, det_abs_c = determinant(b), determinant(np.abs(c))
    checks = [
        abs(det_b - (-4)) <= 1e-9,
        abs(det_abs_c - (-364)) <= 1e-9,
        bool(is_psd(np.abs(b))),
        bool(is_psd(c)),
        not is_psd(b),
        not is_psd(np.abs(c)),
    ]
    elapsed = time.perf_counter() - start
    ok = all(checks) and elapsed < 1.0
    assert report(1, ok, "exact reference values", f"det B={det_b.real:g}, det|C|={det_abs_c.real:g}, {elapsed:.3f}s")


def test_criterion_2_induced_operator_bridge(report):
    start = time.perf_counter()
    g = symmetric_group(3)
    rng = core.make_rng(2, 1)
    mats = [core.complex_gaussian(rng, (3, 3)) for _ in range(50)]
    worst = 0.0
    for lam in ((3,), (2, 1), (1, 1, 1)):
        chi = sn_irreducible(g, lam)
        ctx = symmetrizer(g, chi, 3)
        for a in mats:
            v = gmf_via_induced(ctx, a)
            worst = max(worst, rel(v, immanant(a.T, g, chi)))
            if lam == (1, 1, 1):
                worst = max(worst, rel(v, determinant(a)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-7 and elapsed < 10
    assert report(2, ok, "induced-operator bridge on S_3", f"worst rel err {worst:.2e}, {elapsed:.2f}s")


def test_criterion_3_power_identities(report):
    rng = core.make_rng(3, 1)
    worst = 0.0
    for _ in range(100):
        x = core.complex_gaussian(rng, (3, 3))
        h = x + x.conj().T
        a, b = core.complex_gaussian(rng, (3, 3)), core.complex_gaussian(rng, (3, 3))
        for r in (2, 3):
            worst = max(worst,
                        rel(np.trace(tensor_power(h, r)), np.trace(h) ** r),
                        rel(np.trace(power(h, r, "wedge")), elementary_symmetric(h, r)),
                        rel(np.trace(power(h, r, "vee")), complete_symmetric(h, r)),
                        rel(determinant(tensor_power(a, r)), determinant(a) ** (r * 3 ** (r - 1))))
            for kind in POWER_KINDS:
                lhs = power(a @ b, r, kind)
                worst = max(worst, np.linalg.norm(lhs - power(a, r, kind) @ power(b, r, kind))
                            / max(1.0, np.linalg.norm(lhs)))
    notes, exp_ok = [], True
    for kind in ("wedge", "vee"):
        for n in (2, 3, 4):
            for r in range(1, n + 1):
                est = estimate_det_exponent(kind, n, r, core.make_rng(3, n, r))
                exact = classical_det_exponent(kind, n, r)
                exp_ok &= abs(est - exact) <= 1e-6 * max(1.0, exact)
                if printed_det_exponent(kind, n, r) != exact:
                    notes.append(f"{kind} n={n} r={r}: measured {est:.4f}, printed {printed_det_exponent(kind, n, r):g}")
    ok = worst <= 1e-7 and exp_ok
    detail = f"worst rel err {worst:.2e}; wedge exponent is C(n-1,r-1), printed C(n-r,r-1) differs: {'; '.join(notes)}"
    assert report(3, ok, "power identities and determinant exponents", detail)


def test_criterion_4_block_inequality_suite(report):
    start = time.perf_counter()
    lines, failures = [], 0
    for size in (2, 3):
        reps = run_suite(default_cases(size, size), 200, size, size, seed=4)
        failures += sum(r.failures for r in reps)
        lines.append(f"m=n={size}: {len(reps)} cases, {sum(r.failures for r in reps)} failures")
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 300
    assert report(4, ok, "block and scalar inequality suites, 200 trials per case", f"{'; '.join(lines)}; {elapsed:.1f}s")


def test_criterion_5_partial_functions_positive(report):
    bad, total = 0, 0
    for size in (1, 2, 3):
        for k, f in enumerate(all_functionals(size)):
            rng = core.make_rng(5, size, k)
            for _ in range(200):
                a = BlockMatrix.from_flat(core.random_psd(size * size, rng), size, size)
                for g in (partial_function_1(f, a), partial_function_2(f, a)):
                    total += 1
                    bad += not is_psd(g)
    assert report(5, bad == 0, "partial matrix functions are PSD", f"{total - bad}/{total} verdicts hold")


def test_criterion_6_reshuffle_spectrum(report):
    rng = core.make_rng(6)
    worst, involution = 0.0, True
    for t in range(200):
        m, n = 2 + t % 2, 2 + (t // 2) % 2
        a = BlockMatrix.from_flat(core.random_psd(m * n, rng), m, n)
        r = reshuffle(a)
        involution &= np.array_equal(reshuffle(r).blocks, a.blocks)
        worst = max(worst, float(np.max(np.abs(hermitian_eigenvalues(a.flatten())
                                                 - hermitian_eigenvalues(r.flatten())))))
    ok = worst <= 1e-8 and involution
    assert report(6, ok, "reshuffle preserves the spectrum and is an involution", f"max eig diff {worst:.2e}")


def test_criterion_7_geometry_suite(report):
    start = time.perf_counter()
    tallies = run_geometry_suite(10_000, seed=7, tol=1e-8)
    elapsed = time.perf_counter() - start
    diagnostics = {"signed_gram_det_identity", "signed_gram_psd_nonobtuse"}
    failing = {k: v.failures for k, v in tallies.items() if v.failures and k not in diagnostics}
    ok = not failing and elapsed < 30
    detail = f"{len(tallies)} checks, {elapsed:.1f}s"
    if failing:
        obtuse = tallies["signed_gram_psd"].trials - tallies["signed_gram_psd_nonobtuse"].trials
        # on an obtuse triangle det = 4(u.v)(-u.w)(v.w) < 0, so the signed Gram matrix cannot be PSD
        detail += (f"; violations {failing}; obtuse triangles sampled: {obtuse}; "
                   f"non-obtuse violations: {tallies['signed_gram_psd_nonobtuse'].failures}")
    assert report(7, ok, "geometry suite on 10^4 triples", detail)


def test_criterion_8_principal_embedding(report):
    rng = core.make_rng(8)
    ok, count = True, 0
    for m in (1, 2):
        for n in (1, 2):
            for r in (1, 2):
                idx = principal_embedding_indices(m, n, r)
                for t in range(20):
                    flat = core.complex_gaussian(rng, (m * n, m * n))
                    a = BlockMatrix.from_flat(flat, m, n)
                    big = tensor_power(a.flatten(), r)
                    ok &= np.array_equal(big[np.ix_(idx, idx)], block_tensor_power(a, r).flatten())
                    if t == 0:
                        found = search_principal_embedding(a, r)
                        ok &= len(found) == 1 and np.array_equal(found[0], idx)
                    count += 1
    assert report(8, ok, "blockwise tensor power is a principal submatrix", f"{count} instances, exact equality")


def test_criterion_9_determinism(report, tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        cli.main(["suite", "--trials", "20", "--m", "2", "--n", "2", "--seed", "99", "--out", str(path)])
        outs.append(cli.comparable(json.loads(path.read_text())))
    capsys.readouterr()
    ok = json.dumps(outs[0], sort_keys=True) == json.dumps(outs[1], sort_keys=True)
    assert report(9, ok, "suite reports are deterministic given the seed", "timing fields excluded")
