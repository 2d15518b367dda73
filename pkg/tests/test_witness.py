import numpy as np
import pytest

from chsh_monogamy.cli import witness_sample
from chsh_monogamy.linalg import PureState, kron
from chsh_monogamy.observables import DichotomicObservable, commutator_observable
from chsh_monogamy.seesaw import BellScenario, chsh_scenario
from chsh_monogamy.witness import (CHSH_COEFFICIENTS, WitnessReport, anticommutes,
                                   commutator_correlation, correlation_operator,
                                   local_commutator_bounds, local_commutator_expectations,
                                   tsirelson_commutator_relation, witness_bound)

from conftest import SQRT2, TSIRELSON, X, Y, Z, singlet_vector


def obs(m):
    return DichotomicObservable(m)


def singlet_config():
    a = [obs((Z + X) / SQRT2), obs((Z - X) / SQRT2)]
    b = [obs(-Z), obs(-X)]
    return PureState((2, 2), singlet_vector()), a, b


class TestAnticommutes:
    def test_examples(self):
        assert anticommutes(Y, [Z, X])
        assert not anticommutes(Z, [Z])

    def test_commutator_witness(self, rng):
        from chsh_monogamy.observables import random_projective
        for _ in range(50):
            d = int(rng.integers(2, 7))
            b1, b2 = random_projective(d, rng), random_projective(d, rng)
            assert anticommutes(commutator_observable(b1, b2), [b1, b2])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            anticommutes(Y, [np.eye(4)])


class TestCorrelationOperator:
    def test_scenario_equals_array(self):
        _, a, b = singlet_config()
        np.testing.assert_array_equal(correlation_operator(chsh_scenario(), a, b),
                                      correlation_operator(CHSH_COEFFICIENTS, a, b))

    def test_rejects_marginal_terms(self):
        c = np.zeros((3, 3))
        c[1, 0] = 1.0
        _, a, b = singlet_config()
        with pytest.raises(ValueError):
            correlation_operator(BellScenario(2, (2, 2), c), a, b)

    def test_shape_mismatch(self):
        _, a, b = singlet_config()
        with pytest.raises(ValueError):
            correlation_operator(np.ones((3, 2)), a, b)


class TestWitnessBound:
    def test_singlet_saturates(self):
        psi, a, b = singlet_config()
        rep = witness_bound(psi, CHSH_COEFFICIENTS, a, b, Y)
        assert isinstance(rep, WitnessReport)
        assert rep.bell_value == pytest.approx(TSIRELSON, abs=1e-12)
        assert rep.witness_expectation == pytest.approx(0, abs=1e-15)
        assert rep.bound == pytest.approx(TSIRELSON, abs=1e-15)
        assert rep.residual == pytest.approx(0, abs=1e-12)

    def test_product_state(self):
        psi = PureState((2, 2), [1, 0, 0, 0])
        a = [obs(Z), obs(X)]
        rep = witness_bound(psi, CHSH_COEFFICIENTS, a, [obs(Z), obs(X)], Y)
        assert rep.witness_expectation == 0
        assert rep.bell_value <= 2 + 1e-12
        assert rep.residual > 0

    def test_witness_eigenstate(self):
        # Bob in the +1 eigenstate of Y: the Bell value has to vanish
        psi = PureState((2, 2), np.kron([1, 0], np.array([1, 1j]) / SQRT2))
        a = [obs(Z), obs(X)]
        rep = witness_bound(psi, CHSH_COEFFICIENTS, a, [obs(Z), obs(X)], Y)
        assert rep.witness_expectation == pytest.approx(1, abs=1e-14)
        assert rep.bound == pytest.approx(0, abs=1e-6)
        assert rep.bell_value == pytest.approx(0, abs=1e-10)

    def test_rejects_non_anticommuting(self):
        psi, a, b = singlet_config()
        with pytest.raises(ValueError):
            witness_bound(psi, CHSH_COEFFICIENTS, a, b, Z)

    def test_general_coefficients(self, rng):
        # any Q above the quantum maximum works; sum |p_ij| already bounds the operator norm
        for _ in range(100):
            p = rng.standard_normal((2, 2))
            rho, a, b = witness_sample(rng, max_dim=4)
            w = commutator_observable(*b)
            rep = witness_bound(rho, p, a, b, w, q=float(np.sum(np.abs(p))) * 2)
            assert rep.residual >= -1e-8

    def test_sweep(self, rng):
        for _ in range(500):
            rho, a, b = witness_sample(rng, max_dim=6)
            rep = witness_bound(rho, CHSH_COEFFICIENTS, a, b, commutator_observable(*b))
            assert rep.residual >= -1e-8

    def test_mixed_sweep(self, rng):
        for _ in range(200):
            rho, a, b = witness_sample(rng, max_dim=4, mixed=True)
            rep = witness_bound(rho, CHSH_COEFFICIENTS, a, b, commutator_observable(*b))
            assert rep.residual >= -1e-8


class TestLocalCommutatorBounds:
    def test_singlet(self):
        psi, a, b = singlet_config()
        w_a, w_b = local_commutator_expectations(psi, a, b)
        assert w_a == pytest.approx(0, abs=1e-15) and w_b == pytest.approx(0, abs=1e-15)
        rb, ra = local_commutator_bounds(psi, a, b)
        assert rb == pytest.approx(0, abs=1e-12) and ra == pytest.approx(0, abs=1e-12)

    def test_equal_bob_settings(self, rng):
        psi = PureState.from_vector((2, 2), rng.standard_normal(4) + 1j * rng.standard_normal(4))
        a = [obs(Z), obs(X)]
        b = [obs(Z), obs(Z)]
        _, w_b = local_commutator_expectations(psi, a, b)
        assert w_b == 0
        rb, _ = local_commutator_bounds(psi, a, b)
        assert rb >= TSIRELSON - 2 - 1e-12

    def test_sweep(self, rng):
        for _ in range(500):
            rho, a, b = witness_sample(rng, max_dim=6)
            assert min(local_commutator_bounds(rho, a, b)) >= -1e-8

    def test_printed_normalization_is_stricter(self, rng):
        for _ in range(300):
            rho, a, b = witness_sample(rng, max_dim=3)
            w = local_commutator_bounds(rho, a, b, "witness")
            p = local_commutator_bounds(rho, a, b, "printed")
            assert p[0] <= w[0] + 1e-12 and p[1] <= w[1] + 1e-12

    def test_printed_violation_example(self):
        # 0.3 singlet + 0.7 |0>|+i>: Bell 0.3 * 2 sqrt2, <i[B1, B2]/2> = -0.7
        psi, a, b = singlet_config()
        y_plus = np.kron([1, 0], np.array([1, 1j]) / SQRT2)
        rho = 0.3 * np.outer(psi.amplitudes, psi.amplitudes.conj()) + 0.7 * np.outer(y_plus, y_plus.conj())
        _, w_b = local_commutator_expectations(rho, a, b)
        assert w_b == pytest.approx(-0.7, abs=1e-14)
        rb_w, _ = local_commutator_bounds(rho, a, b, "witness")
        rb_p, _ = local_commutator_bounds(rho, a, b, "printed")
        bell = 0.3 * TSIRELSON
        assert rb_w == pytest.approx(TSIRELSON * np.sqrt(1 - 0.49) - bell, abs=1e-12)
        assert rb_p == pytest.approx(TSIRELSON * np.sqrt(1 - 0.98) - bell, abs=1e-12)
        assert rb_w > 0 > rb_p

    def test_bad_normalization(self):
        psi, a, b = singlet_config()
        with pytest.raises(ValueError):
            local_commutator_bounds(psi, a, b, "other")

    def test_rejects_non_projective(self):
        psi, a, b = singlet_config()
        with pytest.raises(ValueError):
            local_commutator_bounds(psi, a, [obs(Z / 2), b[1]])


class TestTsirelsonRelation:
    def test_singlet(self):
        psi, a, b = singlet_config()
        assert commutator_correlation(psi, a, b) == pytest.approx(4, abs=1e-12)
        assert tsirelson_commutator_relation(psi, a, b) == pytest.approx(0, abs=1e-12)

    def test_commuting(self):
        v = singlet_vector()
        a = [obs(Z), obs(Z)]
        b = [obs(Z), obs(-Z)]
        assert commutator_correlation(np.outer(v, v.conj()), a, b) == 0
        # bound is sqrt(4) = 2
        res = tsirelson_commutator_relation(np.outer(v, v.conj()), a, b)
        from chsh_monogamy.chsh import chsh_value
        assert res == pytest.approx(2 - chsh_value(np.outer(v, v.conj()), a + b), abs=1e-14)

    def test_sweep(self, rng):
        for _ in range(500):
            rho, a, b = witness_sample(rng, max_dim=6)
            assert tsirelson_commutator_relation(rho, a, b) >= -1e-8

    def test_operator_identity(self, rng):
        # B^2 = 4 I - [A1, A2] (x) [B1, B2] for projective observables
        from chsh_monogamy.chsh import chsh_operator
        from chsh_monogamy.observables import random_projective
        a = [random_projective(3, rng) for _ in range(2)]
        b = [random_projective(2, rng) for _ in range(2)]
        op = chsh_operator(*a, *b)
        ca = a[0].matrix @ a[1].matrix - a[1].matrix @ a[0].matrix
        cb = b[0].matrix @ b[1].matrix - b[1].matrix @ b[0].matrix
        np.testing.assert_allclose(op @ op, 4 * np.eye(6) - kron(ca, cb), atol=1e-12)
