import numpy as np
import pytest

from chsh_monogamy.chsh import lemma2_value
from chsh_monogamy.linalg import PureState
from chsh_monogamy.monogamy import (JointMaxResult, commutation_defect, joint_max, joint_target,
                                    monogamy_residual, pair_expectations, random_real_state,
                                    tight_family)

from conftest import I2, SQRT2, TSIRELSON, X, Y, Z, contract_expectation

DIMS = (2, 2, 2)
PAULI = {"X": X, "Z": Z}


def basis_state(*bits):
    amps = np.zeros(8)
    amps[int("".join(map(str, bits)), 2)] = 1.0
    return PureState(DIMS, amps)


def ghz():
    amps = np.zeros(8)
    amps[0] = amps[7] = 1 / SQRT2
    return PureState(DIMS, amps)


def t_oracle(psi, pair):
    """XZ correlation matrix of a pair by explicit contraction."""
    slot = {"AB": (0, 1), "AC": (0, 2)}[pair]
    out = np.zeros((2, 2))
    for i, p in enumerate("XZ"):
        for j, q in enumerate("XZ"):
            ops = [I2, I2, I2]
            ops[slot[0]], ops[slot[1]] = PAULI[p], PAULI[q]
            out[i, j] = contract_expectation(psi.amplitudes, DIMS, ops).real
    return out


def grid_sum_of_squares(psi, n=121):
    """Max over a grid of Alice angles of the best AB and AC values squared.

    For fixed Alice directions the best Bob value is
    ``|T^t (a1 + a2)| + |T^t (a1 - a2)|``.
    """
    t_ab, t_ac = t_oracle(psi, "AB"), t_oracle(psi, "AC")
    ang = np.linspace(0, 2 * np.pi, n, endpoint=False)
    dirs = np.stack([np.sin(ang), np.cos(ang)], axis=1)
    best = 0.0
    for a1 in dirs:
        s, d = a1 + dirs, a1 - dirs
        f_ab = np.linalg.norm(s @ t_ab, axis=1) + np.linalg.norm(d @ t_ab, axis=1)
        f_ac = np.linalg.norm(s @ t_ac, axis=1) + np.linalg.norm(d @ t_ac, axis=1)
        best = max(best, float(np.max(f_ab ** 2 + f_ac ** 2)))
    return best


def yy_oracle(psi, slots):
    ops = [I2, I2, I2]
    for k in slots:
        ops[k] = Y
    return contract_expectation(psi.amplitudes, DIMS, ops).real


class TestTightFamily:
    def test_t_zero(self):
        np.testing.assert_allclose(tight_family(0.0).amplitudes,
                                   np.array([0, 0, 1, 1, 1, 1, 0, 0]) / 2, atol=1e-16)

    def test_t_quarter(self):
        np.testing.assert_allclose(tight_family(np.pi / 4).amplitudes,
                                   np.array([0, 0, 0, 0, 1, 1, 0, 0]) / SQRT2, atol=1e-15)

    @pytest.mark.parametrize("t", np.linspace(0, np.pi / 4, 7))
    def test_normalized_and_real(self, t):
        psi = tight_family(t)
        assert np.linalg.norm(psi.amplitudes) == pytest.approx(1, abs=1e-14)
        assert psi.is_real()

    @pytest.mark.parametrize("t", [-0.1, 1.0, float("nan")])
    def test_out_of_range(self, t):
        with pytest.raises(ValueError):
            tight_family(t)


class TestPairExpectations:
    def test_product(self):
        p = pair_expectations(basis_state(0, 0, 0))
        assert (p.yy_ab, p.yy_ac, p.yy_bc) == (0, 0, 0)

    def test_tight_zero(self):
        p = pair_expectations(tight_family(0.0))
        assert p.yy_ab == pytest.approx(1, abs=1e-15)
        assert p.yy_ac == pytest.approx(0, abs=1e-15)
        assert p.yy_bc == pytest.approx(0, abs=1e-15)

    @pytest.mark.parametrize("t", np.linspace(0, np.pi / 4, 9))
    def test_tight_family_grid(self, t):
        psi = tight_family(t)
        p = pair_expectations(psi)
        oracle = [yy_oracle(psi, s) for s in ((0, 1), (0, 2), (1, 2))]
        np.testing.assert_allclose([p.yy_ab, p.yy_ac, p.yy_bc], oracle, atol=1e-14)
        # at t = pi/4 the expected value is sqrt(0): compare squares
        assert p.yy_ab ** 2 == pytest.approx(np.cos(2 * t), abs=1e-12)
        assert p.yy_ab >= -1e-15
        assert abs(p.yy_ac) <= 1e-14 and abs(p.yy_bc) <= 1e-14

    def test_random_against_oracle(self, rng):
        for _ in range(20):
            psi = random_real_state(rng)
            p = pair_expectations(psi)
            np.testing.assert_allclose([p.yy_ab, p.yy_ac, p.yy_bc],
                                       [yy_oracle(psi, s) for s in ((0, 1), (0, 2), (1, 2))],
                                       atol=1e-13)


class TestJointMax:
    @pytest.mark.parametrize("t", np.linspace(0, np.pi / 4, 9))
    def test_tight_family(self, t):
        res = joint_max(tight_family(t))
        assert res.value_ab == pytest.approx(TSIRELSON * np.cos(t), abs=1e-8)
        assert res.value_ac == pytest.approx(TSIRELSON * np.sin(t), abs=1e-8)
        assert res.sum_of_squares == pytest.approx(8, abs=1e-9)

    def test_product_state(self):
        psi = basis_state(0, 0, 0)
        res = joint_max(psi)
        assert isinstance(res, JointMaxResult)
        assert res.value_ab == pytest.approx(2, abs=1e-12)
        assert res.value_ac == pytest.approx(2, abs=1e-12)
        assert res.sum_of_squares == pytest.approx(joint_target(psi), abs=1e-12)
        assert res.sum_of_squares == pytest.approx(grid_sum_of_squares(psi), abs=1e-9)

    def test_ghz(self):
        psi = ghz()
        res = joint_max(psi)
        yy_bc = yy_oracle(psi, (1, 2))
        assert res.sum_of_squares == pytest.approx(8 * (1 - yy_bc ** 2), abs=1e-9)
        assert res.sum_of_squares == pytest.approx(grid_sum_of_squares(psi), abs=1e-9)

    def test_grid_oracle_random(self, rng):
        # the grid can only undershoot the true maximum
        for _ in range(10):
            psi = random_real_state(rng)
            res = joint_max(psi)
            grid = grid_sum_of_squares(psi, n=181)
            assert grid <= res.sum_of_squares + 1e-9
            assert grid == pytest.approx(res.sum_of_squares, abs=5e-3)

    def test_values_by_contraction(self, rng):
        # re-evaluate the returned measurements without the library's kron path
        for _ in range(5):
            psi = random_real_state(rng)
            res = joint_max(psi)
            for meas, slot, value in ((res.bob_meas, 1, res.value_ab),
                                      (res.charlie_meas, 2, res.value_ac)):
                a1, a2, b1, b2 = (m.matrix for m in meas.observables())
                total = 0.0
                for a, b in ((a1, b1 + b2), (a2, b1 - b2)):
                    ops = [a, I2, I2]
                    ops[slot] = b
                    total += contract_expectation(psi.amplitudes, DIMS, ops).real
                assert total == pytest.approx(value, abs=1e-12)

    def test_shared_alice(self, rng):
        psi = random_real_state(rng)
        res = joint_max(psi)
        np.testing.assert_allclose(res.bob_meas.a1, res.charlie_meas.a1)
        np.testing.assert_allclose(res.bob_meas.a2, res.charlie_meas.a2)
        a1, a2 = res.alice_dirs
        assert abs(a1 @ a2) <= 1e-12

    def test_below_pairwise_bounds(self, rng):
        for _ in range(200):
            psi = random_real_state(rng)
            res = joint_max(psi)
            assert res.value_ab <= lemma2_value(psi, "AB") + 1e-9
            assert res.value_ac <= lemma2_value(psi, "AC") + 1e-9

    def test_sum_matches_yy_target(self, rng):
        for _ in range(300):
            psi = random_real_state(rng)
            res = joint_max(psi)
            assert not res.degenerate
            assert res.sum_of_squares == pytest.approx(joint_target(psi), abs=1e-6)
            assert monogamy_residual(res.value_ab, res.value_ac) >= -1e-9

    def test_rejects_complex(self, rng):
        psi = PureState.from_vector(DIMS, rng.standard_normal(8) + 1j * rng.standard_normal(8))
        with pytest.raises(ValueError):
            joint_max(psi)


class TestCommutationDefect:
    def test_tight_family(self):
        assert commutation_defect(tight_family(0.3)) <= 1e-10

    def test_random_real(self, rng):
        for _ in range(300):
            assert commutation_defect(random_real_state(rng)) <= 1e-10

    def test_complex_state_can_fail(self, rng):
        worst = max(commutation_defect(PureState.from_vector(
            DIMS, rng.standard_normal(8) + 1j * rng.standard_normal(8))) for _ in range(20))
        assert worst > 1e-3


class TestMonogamyResidual:
    def test_examples(self):
        assert monogamy_residual(TSIRELSON, 0) == pytest.approx(0, abs=1e-14)
        assert monogamy_residual(2, 2) == 0
        assert monogamy_residual(2, 0) == 4

    def test_random_state_reproducible(self):
        a = random_real_state(np.random.default_rng(3))
        b = random_real_state(np.random.default_rng(3))
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
        assert a.is_real()
