"""Dense complex linear algebra for small joint Hilbert spaces.

Matrices are plain ``numpy`` complex arrays; states carry their tensor
factorization in :class:`PureState`.  Party A is the most significant
factor, so for three qubits the basis index is ``4a + 2b + c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

ALGEBRAIC_TOL = 1e-10
OPT_TOL = 1e-6

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12

_JACOBI_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 100


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a square complex array; observables are unwrapped."""
    if hasattr(m, "matrix"):
        m = m.matrix
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermitian_check(m, tol: float = HERMITIAN_TOL) -> bool:
    a = as_matrix(m)
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over an ordered tensor factorization."""

    factor_dims: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or any(d <= 0 for d in dims):
            raise ValueError(f"invalid factor dimensions {self.factor_dims}")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise ValueError(
                f"{amps.size} amplitudes do not match factor dims {dims}")
        if abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ValueError("state is not normalized")
        amps.setflags(write=False)
        object.__setattr__(self, "factor_dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, factor_dims: Sequence[int], vec) -> "PureState":
        """Build a state from an unnormalized vector."""
        v = np.asarray(vec, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValueError("zero vector cannot be normalized")
        return cls(tuple(factor_dims), v / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def is_real(self, tol: float = NORM_TOL) -> bool:
        return bool(np.max(np.abs(self.amplitudes.imag)) <= tol)


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(ops: Iterable) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, as_matrix(op))
    return out


def partial_trace(m, factor_dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    The kept factors appear in their original order.
    """
    a = as_matrix(m)
    dims = [int(d) for d in factor_dims]
    n = len(dims)
    if int(np.prod(dims)) != a.shape[0]:
        raise ValueError(
            f"factor dims {dims} do not match matrix dimension {a.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} factors")
    t = a.reshape(dims + dims)
    # pair up each traced row axis with its column axis
    row = list(range(n))
    col = list(range(n, 2 * n))
    for k in range(n):
        if k not in keep:
            col[k] = row[k]
    out_idx = [row[k] for k in keep] + [col[k] for k in keep]
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return np.einsum(t, row + col, out_idx).reshape(kept_dim, kept_dim)


def _jacobi_rotation(app: float, aqq: float, apq: complex):
    """Entries of the 2x2 unitary ``G`` with ``G^H [[app, apq], [apq*, aqq]] G`` diagonal."""
    mag = abs(apq)
    ph = (apq / mag).conjugate()
    theta = (aqq - app) / (2.0 * mag)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    return c, s, -s * ph, c * ph


def _fix_phases(vecs: np.ndarray, tol: float) -> np.ndarray:
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        nz = np.flatnonzero(np.abs(col) > tol)
        if nz.size:
            lead = col[nz[0]]
            vecs[:, j] = col * (abs(lead) / lead)
    return vecs


def hermitian_eig(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps continue until the off-diagonal Frobenius norm drops below
    ``1e-13 * ||h||_F``.  Eigenvalues are returned ascending; each
    eigenvector is phased so its first nonzero component is positive real.

    Raises
    ------
    ValueError
        If ``h`` is not Hermitian.
    """
    h = as_matrix(h)
    if not hermitian_check(h):
        raise ValueError("hermitian_eig requires a Hermitian matrix")
    n = h.shape[0]
    # plain lists: per-element numpy indexing dominates at these sizes
    a = (0.5 * (h + h.conj().T)).tolist()
    v = np.eye(n, dtype=complex).tolist()
    scale = float(np.linalg.norm(h))
    target = (_JACOBI_TOL * scale) ** 2
    skip = 1e-18 * scale
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j)
        if off <= target or scale == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if abs(apq) <= skip or apq == 0:
                    continue
                g00, g01, g10, g11 = _jacobi_rotation(a[p][p].real, a[q][q].real, apq)
                c10, c11 = g10.conjugate(), g11.conjugate()
                for row in a:
                    x, y = row[p], row[q]
                    row[p] = g00 * x + g10 * y
                    row[q] = g01 * x + g11 * y
                rp, rq = a[p], a[q]
                a[p] = [g00 * x + c10 * y for x, y in zip(rp, rq)]
                a[q] = [g01 * x + c11 * y for x, y in zip(rp, rq)]
                a[p][q] = a[q][p] = 0j
                for row in v:
                    x, y = row[p], row[q]
                    row[p] = g00 * x + g10 * y
                    row[q] = g01 * x + g11 * y
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    evals = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(evals, kind="stable")
    evals = evals[order]
    vecs = _fix_phases(np.array(v, dtype=complex)[:, order], ALGEBRAIC_TOL)
    return EigenDecomposition(evals, vecs)


def top_eigenvector(h) -> tuple[float, np.ndarray]:
    eig = hermitian_eig(h)
    return float(eig.eigenvalues[-1]), eig.eigenvectors[:, -1]


def expectation(state, m) -> float:
    """Real expectation value of ``m`` in a pure state or density matrix."""
    op = as_matrix(m)
    if isinstance(state, PureState):
        psi = state.amplitudes
        if psi.size != op.shape[0]:
            raise ValueError("state and operator dimensions differ")
        val = np.vdot(psi, op @ psi)
    else:
        rho = np.asarray(state, dtype=complex)
        if rho.ndim == 1:
            if rho.size != op.shape[0]:
                raise ValueError("state and operator dimensions differ")
            val = np.vdot(rho, op @ rho)
        else:
            if rho.shape != op.shape:
                raise ValueError("state and operator dimensions differ")
            val = np.sum(op * rho.T)
    scale = max(1.0, np.linalg.norm(op, 2) if op.size else 1.0)
    if abs(val.imag) > ALGEBRAIC_TOL * scale:
        raise ValueError(f"expectation has imaginary part {val.imag:.3g}; operator not Hermitian?")
    return float(val.real)


def density(state) -> np.ndarray:
    if isinstance(state, PureState):
        return state.density()
    rho = np.asarray(state, dtype=complex)
    if rho.ndim == 1:
        return np.outer(rho, rho.conj())
    return rho


def permute_factors(state: PureState, order: Sequence[int]) -> PureState:
    """Reorder the tensor factors of ``state``; ``order[i]`` is the old factor placed at slot i."""
    t = state.amplitudes.reshape(state.factor_dims)
    t = np.transpose(t, order)
    dims = tuple(state.factor_dims[k] for k in order)
    return PureState(dims, t.reshape(-1))


# JSON wire formats: complex numbers are [re, im] pairs, matrices row-major.

def matrix_to_json(m) -> dict:
    a = as_matrix(m)
    return {"dim": a.shape[0],
            "entries": [[float(z.real), float(z.imag)] for z in a.reshape(-1)]}


def matrix_from_json(obj: dict) -> np.ndarray:
    n = int(obj["dim"])
    entries = obj["entries"]
    if len(entries) != n * n:
        raise ValueError(f"matrix of dim {n} needs {n * n} entries, got {len(entries)}")
    vals = np.array([complex(re, im) for re, im in entries])
    return vals.reshape(n, n)


def state_to_json(state: PureState) -> dict:
    return {"factor_dims": list(state.factor_dims),
            "amplitudes": [[float(z.real), float(z.imag)] for z in state.amplitudes]}


def state_from_json(obj: dict) -> PureState:
    amps = np.array([complex(re, im) for re, im in obj["amplitudes"]])
    return PureState(tuple(obj["factor_dims"]), amps)
