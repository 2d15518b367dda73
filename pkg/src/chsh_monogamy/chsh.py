"""CHSH operators, correlation matrices and closed-form maximization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (ALGEBRAIC_TOL, PureState, as_matrix, expectation, hermitian_check,
                     hermitian_eig, kron, partial_trace)
from .observables import direction_observable, pauli

_BASES = {"XZ": ("X", "Z"), "XYZ": ("X", "Y", "Z")}
_PAIRS = {"AB": (0, 1), "AC": (0, 2), "BC": (1, 2)}


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pauli-pair expectations ``T[i, j] = <s_i (x) s_j>``."""

    basis: str
    entries: np.ndarray

    def __post_init__(self):
        if self.basis not in _BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        t = np.asarray(self.entries, dtype=float)
        k = len(_BASES[self.basis])
        if t.shape != (k, k):
            raise ValueError(f"{self.basis} correlation matrix must be {k}x{k}")
        t.setflags(write=False)
        object.__setattr__(self, "entries", t)


@dataclass(frozen=True)
class ChshMeasurements:
    """Planar measurement directions ``(x, z)`` for the four CHSH observables.

    ``d1``, ``d2`` and ``theta`` record the decomposition
    ``b1 + b2 = 2 cos(theta) d1`` and ``b1 - b2 = 2 sin(theta) d2``.
    """

    a1: np.ndarray
    a2: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    theta: float
    d1: np.ndarray
    d2: np.ndarray

    def observables(self):
        return tuple(direction_observable(v) for v in (self.a1, self.a2, self.b1, self.b2))


def _as_t(t) -> np.ndarray:
    return np.asarray(t.entries if isinstance(t, CorrelationMatrix) else t, dtype=float)


def chsh_operator(a1, a2, b1, b2) -> np.ndarray:
    """``A1 (x) (B1 + B2) + A2 (x) (B1 - B2)``."""
    a1, a2, b1, b2 = (as_matrix(m) for m in (a1, a2, b1, b2))
    if a1.shape != a2.shape or b1.shape != b2.shape:
        raise ValueError("each party's observables must share a dimension")
    return kron(a1, b1 + b2) + kron(a2, b1 - b2)


def chsh_value(rho, measurements: Sequence) -> float:
    """``tr(B rho)`` for ``measurements = (A1, A2, B1, B2)`` or a :class:`ChshMeasurements`."""
    if isinstance(measurements, ChshMeasurements):
        measurements = measurements.observables()
    op = chsh_operator(*measurements)
    return expectation(rho, op)


def correlation_matrix(rho_ab, basis: str = "XZ") -> CorrelationMatrix:
    """Correlation matrix of a two-qubit density matrix (or :class:`PureState`)."""
    if isinstance(rho_ab, PureState):
        rho_ab = rho_ab.density()
    rho = as_matrix(rho_ab)
    if rho.shape != (4, 4):
        raise ValueError("correlation_matrix needs a two-qubit (4x4) density matrix")
    if not hermitian_check(rho, 1e-10):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > ALGEBRAIC_TOL:
        raise ValueError("density matrix does not have unit trace")
    names = _BASES[basis]
    t = np.array([[expectation(rho, kron(pauli(i), pauli(j))) for j in names] for i in names])
    return CorrelationMatrix(basis, t)


def horodecki_max(t) -> float:
    """Maximal CHSH value ``2 sqrt(u1 + u2)`` from the two largest eigenvalues of ``T^t T``."""
    t = _as_t(t)
    u = hermitian_eig(t.T @ t).eigenvalues
    return 2.0 * float(np.sqrt(max(u[-1] + u[-2], 0.0)))


def real_max(t) -> float:
    """Maximal CHSH value over real planar measurements, ``2 ||T||_F``."""
    t = _as_t(t)
    if t.shape != (2, 2):
        raise ValueError("real_max expects a 2x2 XZ correlation matrix")
    return 2.0 * float(np.sqrt(np.trace(t @ t.T)))


def _orthogonal(v: np.ndarray) -> np.ndarray:
    return np.array([-v[1], v[0]])


def _unit_or(v: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v / n if n > ALGEBRAIC_TOL else fallback


def measurements_from(a1, a2, d1, d2, t) -> ChshMeasurements:
    """Complete Alice's directions and an orthonormal ``(d1, d2)`` into CHSH settings."""
    t = _as_t(t)
    n1, n2 = np.linalg.norm(t @ d1), np.linalg.norm(t @ d2)
    theta = float(np.arctan2(n2, n1))
    b1 = np.cos(theta) * d1 + np.sin(theta) * d2
    b2 = np.cos(theta) * d1 - np.sin(theta) * d2
    return ChshMeasurements(np.asarray(a1, float), np.asarray(a2, float),
                            b1 / np.linalg.norm(b1), b2 / np.linalg.norm(b2), theta,
                            np.asarray(d1, float), np.asarray(d2, float))


def optimal_directions(t) -> ChshMeasurements:
    """Planar settings achieving :func:`real_max` for an XZ correlation matrix.

    ``d1, d2`` are the right singular vectors of ``T`` (largest first),
    Alice's directions are ``unit(T d_i)`` and Bob's pair is rebuilt from
    ``theta = atan2(|T d2|, |T d1|)``.
    """
    t = _as_t(t)
    if t.shape != (2, 2):
        raise ValueError("optimal_directions expects a 2x2 XZ correlation matrix")
    if np.linalg.norm(t) <= ALGEBRAIC_TOL:
        raise ValueError("correlation matrix vanishes; no optimal direction is defined")
    vecs = hermitian_eig(t.T @ t).eigenvectors.real
    d1, d2 = vecs[:, 1], vecs[:, 0]
    a1 = _unit_or(t @ d1, np.array([0.0, 1.0]))
    a2 = _unit_or(t @ d2, _orthogonal(a1))
    return measurements_from(a1, a2, d1, d2, t)


def reduced_pair(psi: PureState, pair: str) -> np.ndarray:
    if pair not in _PAIRS:
        raise ValueError(f"pair must be one of {sorted(_PAIRS)}")
    return partial_trace(psi.density(), psi.factor_dims, _PAIRS[pair])


def yy_expectation(psi: PureState, pair: str) -> float:
    """``<Y (x) Y>`` on the named pair of a three-qubit state."""
    ops = [pauli("I")] * 3
    for k in _PAIRS[pair]:
        ops[k] = pauli("Y")
    return expectation(psi, kron(kron(ops[0], ops[1]), ops[2]))


def _require_real_three_qubit(psi: PureState):
    if psi.factor_dims != (2, 2, 2):
        raise ValueError("expected a three-qubit state")
    if not psi.is_real():
        raise ValueError("state must have real amplitudes")


def lemma2_value(psi: PureState, pair: str = "AB") -> float:
    """Closed-form real CHSH maximum on one pair of a real three-qubit state.

    ``2 sqrt(1 + <YY>_pair^2 - <YY>_other1^2 - <YY>_other2^2)``.
    """
    _require_real_three_qubit(psi)
    if pair not in _PAIRS:
        raise ValueError(f"pair must be one of {sorted(_PAIRS)}")
    yy = {p: yy_expectation(psi, p) for p in _PAIRS}
    inside = 1.0 + yy[pair] ** 2 - sum(v ** 2 for p, v in yy.items() if p != pair)
    return 2.0 * float(np.sqrt(max(inside, 0.0)))


def pair_bound_via_t(psi: PureState, pair: str = "AB") -> float:
    """Same maximum computed through the pair's XZ correlation matrix."""
    _require_real_three_qubit(psi)
    return real_max(correlation_matrix(reduced_pair(psi, pair), "XZ"))
