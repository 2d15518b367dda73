"""Joint CHSH maximization on AB and AC with shared Alice measurements."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chsh import (ChshMeasurements, correlation_matrix, measurements_from, reduced_pair,
                   yy_expectation, _require_real_three_qubit)
from .linalg import PureState, expectation, hermitian_eig, kron, kron_all
from .observables import direction_observable, pauli

TIGHT_T_MAX = np.pi / 4
_DEGENERATE_TOL = 1e-9


@dataclass(frozen=True)
class PairExpectations:
    yy_ab: float
    yy_ac: float
    yy_bc: float


@dataclass(frozen=True)
class JointMaxResult:
    value_ab: float
    value_ac: float
    alice_dirs: tuple
    bob_meas: ChshMeasurements
    charlie_meas: ChshMeasurements
    # no eigen-gap in either T T^t product; Alice's basis fell back to axes
    degenerate: bool = False

    @property
    def sum_of_squares(self) -> float:
        return self.value_ab ** 2 + self.value_ac ** 2


def tight_family(t: float) -> PureState:
    """Three-qubit state on the boundary circle, values ``2 sqrt2 (cos t, sin t)``.

    ``c_- (|010> + |011>) + c_+ (|100> + |101>)`` with
    ``c_+- = sqrt(1 +- sqrt2 sin t) / 2`` and ``0 <= t <= pi/4``.
    """
    if not (0.0 <= t <= TIGHT_T_MAX + 1e-15):
        raise ValueError(f"t = {t} outside [0, pi/4]")
    s = np.sqrt(2.0) * np.sin(t)
    c_plus = 0.5 * np.sqrt(1.0 + s)
    c_minus = 0.5 * np.sqrt(max(1.0 - s, 0.0))
    amps = np.zeros(8)
    amps[0b010] = amps[0b011] = c_minus
    amps[0b100] = amps[0b101] = c_plus
    return PureState.from_vector((2, 2, 2), amps)


def pair_expectations(psi: PureState) -> PairExpectations:
    return PairExpectations(yy_expectation(psi, "AB"), yy_expectation(psi, "AC"),
                            yy_expectation(psi, "BC"))


def _gram(psi: PureState, pair: str) -> tuple[np.ndarray, np.ndarray]:
    t = correlation_matrix(reduced_pair(psi, pair), "XZ").entries
    return t, t @ t.T


def commutation_defect(psi: PureState) -> float:
    """Frobenius norm of ``[T_AB T_AB^t, T_AC T_AC^t]``."""
    _, s_ab = _gram(psi, "AB")
    _, s_ac = _gram(psi, "AC")
    return float(np.linalg.norm(s_ab @ s_ac - s_ac @ s_ab))


def _shared_alice_basis(s_ab: np.ndarray, s_ac: np.ndarray) -> tuple[np.ndarray, bool]:
    # the product with the wider eigen-gap gives the better-conditioned basis
    best, gap_best = None, -1.0
    for s in (s_ab, s_ac):
        eig = hermitian_eig(s)
        gap = eig.eigenvalues[-1] - eig.eigenvalues[0]
        if gap > gap_best:
            best, gap_best = eig.eigenvectors.real, gap
    if gap_best <= _DEGENERATE_TOL:
        return np.eye(2), True
    return best[:, ::-1], False


def _dual_directions(t: np.ndarray, alice: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``d_i = unit(T^t a_i)``, repairing zero vectors so that ``d1 _|_ d2``."""
    raw = [t.T @ alice[:, i] for i in range(2)]
    norms = [np.linalg.norm(v) for v in raw]
    if max(norms) <= _DEGENERATE_TOL:
        return np.array([1.0, 0.0]), np.array([0.0, 1.0])
    if norms[0] >= norms[1]:
        d1 = raw[0] / norms[0]
        d2 = raw[1] / norms[1] if norms[1] > _DEGENERATE_TOL else np.array([-d1[1], d1[0]])
    else:
        d2 = raw[1] / norms[1]
        d1 = np.array([d2[1], -d2[0]]) if norms[0] <= _DEGENERATE_TOL else raw[0] / norms[0]
    return d1, d2


def _pair_operator(meas: ChshMeasurements, third: int) -> np.ndarray:
    """CHSH operator on A and one other qubit, identity on ``third``."""
    a1, a2, b1, b2 = (m.matrix for m in meas.observables())
    eye = pauli("I")

    def place(a, b):
        ops = [a, b, eye] if third == 2 else [a, eye, b]
        return kron_all(ops)

    return place(a1, b1 + b2) + place(a2, b1 - b2)


def joint_max(psi: PureState) -> JointMaxResult:
    """Maximize ``<B_AB>^2 + <B_AC>^2`` with one pair of Alice settings.

    Alice's directions are simultaneous eigenvectors of ``T_AB T_AB^t`` and
    ``T_AC T_AC^t``; Bob's and Charlie's are built from ``T^t a_i``.  The
    reported values come from evaluating the explicit three-qubit CHSH
    operators with the constructed observables.
    """
    _require_real_three_qubit(psi)
    t_ab, s_ab = _gram(psi, "AB")
    t_ac, s_ac = _gram(psi, "AC")
    alice, degenerate = _shared_alice_basis(s_ab, s_ac)
    a1, a2 = alice[:, 0], alice[:, 1]

    d1, d2 = _dual_directions(t_ab, alice)
    e1, e2 = _dual_directions(t_ac, alice)
    bob = measurements_from(a1, a2, d1, d2, t_ab)
    charlie = measurements_from(a1, a2, e1, e2, t_ac)

    v_ab = expectation(psi, _pair_operator(bob, third=2))
    v_ac = expectation(psi, _pair_operator(charlie, third=1))
    return JointMaxResult(v_ab, v_ac, (a1, a2), bob, charlie, degenerate)


def monogamy_residual(v_ab: float, v_ac: float) -> float:
    return 8.0 - v_ab ** 2 - v_ac ** 2


def joint_target(psi: PureState) -> float:
    """``8 (1 - <Y_B Y_C>^2)``."""
    return 8.0 * (1.0 - yy_expectation(psi, "BC") ** 2)


def random_real_state(rng: np.random.Generator, n_qubits: int = 3) -> PureState:
    return PureState.from_vector((2,) * n_qubits, rng.standard_normal(2 ** n_qubits))
