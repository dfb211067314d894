import numpy as np
import pytest

from immanant_lab import core
from immanant_lab.blocks import BlockMatrix
from immanant_lab.errors import DimensionMismatchError
from immanant_lab.functions import MatrixFunctional
from immanant_lab.harness import (
    CASE_IDS,
    InequalityCase,
    check_case,
    default_cases,
    passes,
    replay,
    run_case,
    run_suite,
)

from conftest import psd


def blocks(rng, m, n, k):
    return [BlockMatrix.from_flat(psd(rng, m * n), m, n) for _ in range(k)]


class TestCases:
    def test_validation(self):
        with pytest.raises(ValueError):
            InequalityCase("NOPE")
        with pytest.raises(ValueError):
            InequalityCase("LEM32")
        with pytest.raises(ValueError):
            InequalityCase("THM35_G1")
        assert InequalityCase("EEQ0").functional.kind == "determinant"
        assert InequalityCase("EQLS").arity == 2
        assert InequalityCase("LEM32", power_kind="vee").ambient == "matrix"

    def test_arity_mismatch(self, rng):
        with pytest.raises(DimensionMismatchError):
            check_case(InequalityCase("EEQ0"), [psd(rng, 2)] * 3)
        with pytest.raises(DimensionMismatchError):
            check_case(InequalityCase("EQLS"), [psd(rng, 4)] * 2)
        with pytest.raises(DimensionMismatchError):
            check_case(InequalityCase("EEQ0"), [psd(rng, 2), psd(rng, 3)])


class TestMargins:
    def test_eeq0_zero_second(self, rng):
        a = psd(rng, 3)
        assert check_case(InequalityCase("EEQ0"), [a, np.zeros((3, 3))]) == 0.0

    def test_chain_eeq3_eeq2_eeq1(self, rng):
        for f in (MatrixFunctional("determinant"), MatrixFunctional("permanent"), MatrixFunctional.sn((2, 1))):
            for _ in range(30):
                a, b, c = psd(rng, 3), psd(rng, 3), psd(rng, 3)
                scale = 1 + max(np.linalg.norm(x) for x in (a, b, c)) ** 3
                m2 = check_case(InequalityCase("EEQ2", f), [a, b, c])
                m1 = check_case(InequalityCase("EEQ1", f), [a, b])
                m3 = check_case(InequalityCase("EEQ3", f), [a, b, c])
                assert m2 >= m1 - 1e-8 * scale
                assert m1 >= -1e-8 * scale and m3 >= -1e-8 * scale

    def test_m_equals_one_collapse(self, rng):
        det = MatrixFunctional("determinant")
        trip = [psd(rng, 3) for _ in range(3)]
        as_blocks = [BlockMatrix.from_flat(x, 1, 3) for x in trip]
        block = check_case(InequalityCase("THM35_G2", det), as_blocks)
        scalar = check_case(InequalityCase("SCALAR_DET_3TERM"), trip)
        assert block == pytest.approx(scalar, rel=1e-9, abs=1e-9)

    def test_zero_third_input(self, rng):
        a, b = blocks(rng, 2, 2, 2)
        z = BlockMatrix(np.zeros((2, 2, 2, 2)))
        det = MatrixFunctional("determinant")
        thm = check_case(InequalityCase("THM35_G2", det), [a, b, z])
        assert abs(thm) < 1e-9
        cor = check_case(InequalityCase("COR36_G2", det), [a, b, z])
        assert cor == pytest.approx(check_case(InequalityCase("EQLS"), [a, b]), abs=1e-9)

    def test_unitary_invariance_scalar(self, rng):
        u = core.random_unitary(3, 4)
        trip = [psd(rng, 3) for _ in range(3)]
        conj = [u.conj().T @ x @ u for x in trip]
        case = InequalityCase("SCALAR_DET_3TERM")
        assert check_case(case, conj) == pytest.approx(check_case(case, trip), rel=1e-7)

    def test_block_unitary_invariance(self, rng):
        u = core.random_unitary(2, 8)
        big = np.kron(u, np.eye(2))
        trip = blocks(rng, 2, 2, 3)
        conj = [BlockMatrix.from_flat(big.conj().T @ x.flatten() @ big, 2, 2) for x in trip]
        case = InequalityCase("THM35_G2", MatrixFunctional("determinant"))
        assert check_case(case, conj) == pytest.approx(check_case(case, trip), rel=1e-7, abs=1e-9)

    def test_scaling_covariance(self, rng):
        a, b = psd(rng, 3), psd(rng, 3)
        case = InequalityCase("EEQ0")
        t = 1.7
        assert check_case(case, [t * a, t * b]) == pytest.approx(t**3 * check_case(case, [a, b]), rel=1e-7)

    def test_detects_violation(self):
        # indefinite input breaks superadditivity of det
        a, b = np.eye(2), -np.eye(2)
        m = check_case(InequalityCase("EEQ0"), [a, b])
        assert m == pytest.approx(-2) and not passes(m, [a, b])


class TestSuites:
    def test_zero_trials(self):
        reps = run_suite(default_cases(2, 2), 0, 2, 2)
        assert reps and all(r.failures == 0 and r.worst_margin is None for r in reps)

    def test_eeq0_seed7(self):
        (rep,) = run_suite([InequalityCase("EEQ0")], 100, 3, 3, seed=7)
        assert rep.trials == 100 and rep.failures == 0 and rep.worst_margin >= 0

    def test_default_case_inventory(self):
        cases = default_cases(3, 3)
        ids = {c.id for c in cases}
        assert ids == set(CASE_IDS)
        assert sum(c.id == "THM35_G1" for c in cases) == 7
        assert sum(c.id == "LEM32" for c in cases) == 3
        with pytest.raises(ValueError):
            default_cases(2, 2, ids=["XX"])

    def test_deterministic_and_replayable(self, monkeypatch):
        case = InequalityCase("COR36_G1", MatrixFunctional("permanent"))
        r1 = run_case(case, 12, 2, 2, seed=3)
        monkeypatch.setenv("IMMANANT_LAB_THREADS", "4")
        r2 = run_case(case, 12, 2, 2, seed=3)
        assert r1.to_json() == r2.to_json()
        inst = replay(case, 2, 2, 3, 5)
        again = replay(case, 2, 2, 3, 5)
        assert all(np.array_equal(x.blocks, y.blocks) for x, y in zip(inst, again))

    def test_failures_recorded(self):
        # a negative tolerance demands margins above 1e6, so every trial is recorded
        case = InequalityCase("EEQ0")
        rep = run_case(case, 5, 2, 2, tol=-1e6)
        assert rep.failures == 5 and rep.failing_trials == list(range(5))

    def test_default_suite_small(self):
        reps = run_suite(default_cases(2, 2), 15, 2, 2, seed=1)
        assert sum(r.failures for r in reps) == 0
