"""Dichotomic observables and the Pauli / planar families."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import ALGEBRAIC_TOL, HERMITIAN_TOL, as_matrix, hermitian_check, hermitian_eig

PROJECTIVE_TOL = 1e-9

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli(name: str) -> np.ndarray:
    try:
        return _PAULI[name.upper()].copy()
    except (KeyError, AttributeError):
        raise ValueError(f"unknown Pauli operator {name!r}") from None


@dataclass(frozen=True)
class DichotomicObservable:
    """Hermitian matrix with spectrum in [-1, 1].

    ``projective`` is certified at construction: it is true iff every
    eigenvalue lies within ``1e-9`` of +1 or -1.
    """

    matrix: np.ndarray
    projective: bool = field(init=False)

    def __post_init__(self):
        m = as_matrix(self.matrix).copy()
        if not hermitian_check(m, HERMITIAN_TOL):
            raise ValueError("observable must be Hermitian")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        n = m.shape[0]
        # cheap certificate first: M^2 = I forces a +-1 spectrum
        if np.linalg.norm(m @ m - np.eye(n)) <= ALGEBRAIC_TOL:
            object.__setattr__(self, "projective", True)
            return
        evals = hermitian_eig(m).eigenvalues
        if evals[0] < -1 - ALGEBRAIC_TOL or evals[-1] > 1 + ALGEBRAIC_TOL:
            raise ValueError(f"spectrum [{evals[0]:.6g}, {evals[-1]:.6g}] leaves [-1, 1]")
        proj = bool(np.all(np.abs(np.abs(evals) - 1.0) <= PROJECTIVE_TOL))
        object.__setattr__(self, "projective", proj)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __neg__(self) -> "DichotomicObservable":
        return DichotomicObservable(-self.matrix)


def unit_direction(v, tol: float = 1e-12) -> np.ndarray:
    """Validate a 2-vector ``(x, z)`` or 3-vector ``(x, y, z)`` of unit norm."""
    d = np.asarray(v, dtype=float).reshape(-1)
    if d.size not in (2, 3):
        raise ValueError("measurement direction must have 2 or 3 components")
    if abs(np.linalg.norm(d) - 1.0) > tol:
        raise ValueError(f"measurement direction {d} is not a unit vector")
    return d


def planar_observable(theta: float) -> DichotomicObservable:
    """``cos(theta) Z + sin(theta) X``."""
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    return DichotomicObservable(np.cos(theta) * _PAULI["Z"] + np.sin(theta) * _PAULI["X"])


def direction_observable(d) -> DichotomicObservable:
    """Dot product of a unit direction with ``(X, Z)`` or ``(X, Y, Z)``."""
    d = unit_direction(d)
    basis = ("X", "Z") if d.size == 2 else ("X", "Y", "Z")
    m = sum(c * _PAULI[b] for c, b in zip(d, basis))
    return DichotomicObservable(m)


def commutator_observable(b1, b2) -> DichotomicObservable:
    """The observable ``i[b1, b2]/2``, which anticommutes with both inputs."""
    for b in (b1, b2):
        if not isinstance(b, DichotomicObservable):
            raise TypeError("commutator_observable expects DichotomicObservable inputs")
        if not b.projective:
            raise ValueError("commutator_observable requires projective observables")
    if b1.dim != b2.dim:
        raise ValueError("observables act on different dimensions")
    m1, m2 = b1.matrix, b2.matrix
    return DichotomicObservable(0.5j * (m1 @ m2 - m2 @ m1))


def random_projective(dim: int, rng: np.random.Generator, n_plus: int | None = None,
                      real: bool = False) -> DichotomicObservable:
    """Random +-1 observable ``U diag(+-1) U^dagger`` with Haar-distributed ``U``."""
    from scipy.stats import ortho_group, unitary_group

    if n_plus is None:
        n_plus = int(rng.integers(0, dim + 1))
    signs = np.array([1.0] * n_plus + [-1.0] * (dim - n_plus))
    if dim == 1:
        u = np.eye(1)
    elif real:
        u = ortho_group.rvs(dim, random_state=rng)
    else:
        u = unitary_group.rvs(dim, random_state=rng)
    return DichotomicObservable((u * signs) @ u.conj().T)
