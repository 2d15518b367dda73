"""Simultaneous block-diagonalization of a pair of +-1 observables.

Any two projective observables on C^{2d}, each with d-dimensional +1 and
-1 eigenspaces, are unitarily equivalent to a direct sum of qubit blocks

    M1 = Z + Z + ... ,    M2 = sum_j (cos t_j Z + sin t_j X),

with angles t_j in [0, pi].  :func:`canonicalize_pair` constructs the
basis change explicitly; :func:`assemble_blocks` is its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, hermitian_eig
from .observables import DichotomicObservable

_VANISH_TOL = 1e-13


@dataclass(frozen=True)
class CanonicalForm:
    basis_change: np.ndarray
    angles: np.ndarray

    def blocks(self) -> tuple[np.ndarray, np.ndarray]:
        return assemble_blocks(self.angles)

    def to_json(self) -> dict:
        from .linalg import matrix_to_json
        return {"basis_change": matrix_to_json(self.basis_change),
                "angles": [float(t) for t in self.angles]}


def _check_projective(*obs):
    for m in obs:
        if not isinstance(m, DichotomicObservable):
            raise TypeError("expected DichotomicObservable inputs")
        if not m.projective:
            raise ValueError("canonicalization requires projective (+-1) observables")


def _trace_int(m: DichotomicObservable) -> int:
    return int(round(np.trace(m.matrix).real))


def balance_pair(m1: DichotomicObservable, m2: DichotomicObservable):
    """Embed a projective pair into a space where both are traceless.

    Each observable is extended by a diagonal +-1 block on a common
    complement; the extension is as small as possible.  Already balanced
    pairs are returned unchanged.
    """
    _check_projective(m1, m2)
    if m1.dim != m2.dim:
        raise ValueError("observables act on different dimensions")
    t1, t2 = _trace_int(m1), _trace_int(m2)
    k = max(abs(t1), abs(t2))
    if k == 0:
        return m1, m2

    def pad(t: int) -> np.ndarray:
        fill = [-np.sign(t)] * abs(t)
        rest = k - abs(t)
        fill += [1.0, -1.0] * (rest // 2)
        return np.diag(np.array(fill, dtype=float))

    def embed(m: np.ndarray, extra: np.ndarray) -> np.ndarray:
        n = m.shape[0]
        out = np.zeros((n + k, n + k), dtype=complex)
        out[:n, :n] = m
        out[n:, n:] = extra
        return out

    return (DichotomicObservable(embed(m1.matrix, pad(t1))),
            DichotomicObservable(embed(m2.matrix, pad(t2))))


def _orthonormal_columns(cols: np.ndarray) -> np.ndarray:
    """Gram-Schmidt over columns taken in order of decreasing norm.

    Columns that vanish after projection are replaced by the first
    standard basis vector not yet spanned.  Processing large columns
    first keeps the reconstruction error at machine precision even when
    some norms are tiny.
    """
    n, k = cols.shape
    order = np.argsort(-np.linalg.norm(cols, axis=0), kind="stable")
    out = np.zeros((n, k), dtype=complex)
    done = []
    for j in order:
        v = cols[:, j].astype(complex)
        for _ in range(2):
            for i in done:
                v = v - out[:, i] * np.vdot(out[:, i], v)
        nv = np.linalg.norm(v)
        if nv <= _VANISH_TOL:
            for e in range(n):
                v = np.zeros(n, dtype=complex)
                v[e] = 1.0
                for _ in range(2):
                    for i in done:
                        v = v - out[:, i] * np.vdot(out[:, i], v)
                nv = np.linalg.norm(v)
                if nv > 0.5:
                    break
        out[:, j] = v / nv
        done.append(j)
    return out


def canonicalize_pair(m1: DichotomicObservable, m2: DichotomicObservable) -> CanonicalForm:
    """Find a unitary bringing a balanced pair into qubit-block form.

    Returns a :class:`CanonicalForm` ``(U, angles)`` with
    ``U m1 U^H = Z + ... + Z`` and ``U m2 U^H = sum_j (cos t_j Z + sin t_j X)``,
    angles sorted ascending in [0, pi].

    Raises
    ------
    ValueError
        If the inputs are not projective, not traceless, or of odd dimension.
    """
    _check_projective(m1, m2)
    if m1.dim != m2.dim:
        raise ValueError("observables act on different dimensions")
    n = m1.dim
    if n % 2:
        raise ValueError("canonicalization needs an even dimension; call balance_pair first")
    if _trace_int(m1) != 0 or _trace_int(m2) != 0:
        raise ValueError("observables must be traceless; call balance_pair first")
    d = n // 2

    # m1 -> diag(I_d, -I_d)
    e1 = hermitian_eig(m1.matrix)
    w0 = np.concatenate([e1.eigenvectors[:, d:], e1.eigenvectors[:, :d]], axis=1)
    m2p = w0.conj().T @ m2.matrix @ w0

    # P spans the +1 eigenspace of m2 in the new basis
    e2 = hermitian_eig(0.5 * (m2p + m2p.conj().T))
    p = e2.eigenvectors[:, d:]
    p1, p2 = p[:d], p[d:]

    # P1^H P1 and P2^H P2 = I - P1^H P1 share the eigenbasis q (q = V^H)
    g1 = p1.conj().T @ p1
    q = hermitian_eig(0.5 * (g1 + g1.conj().T)).eigenvectors
    u1h = _orthonormal_columns(p1 @ q)
    u2h = _orthonormal_columns(p2 @ q)

    u = np.zeros((n, n), dtype=complex)
    u[:d, :d] = u1h.conj().T
    u[d:, d:] = u2h.conj().T
    u = u @ w0.conj().T

    # interleave rows (j, d + j) into qubit blocks
    m2c = u @ m2.matrix @ u.conj().T
    raw = np.array([abs(np.arctan2(m2c[d + j, j].real, m2c[j, j].real)) for j in range(d)])
    order = np.argsort(raw, kind="stable")
    perm = np.empty(n, dtype=int)
    perm[0::2] = order
    perm[1::2] = order + d
    u = u[perm]
    return CanonicalForm(u, raw[order])


def assemble_blocks(angles) -> tuple[np.ndarray, np.ndarray]:
    """Direct sums ``(Z + ... + Z, sum_j cos t_j Z + sin t_j X)``."""
    th = np.asarray(angles, dtype=float).reshape(-1)
    d = th.size
    a = np.zeros((2 * d, 2 * d))
    b = np.zeros((2 * d, 2 * d))
    for j, t in enumerate(th):
        s = slice(2 * j, 2 * j + 2)
        a[s, s] = [[1.0, 0.0], [0.0, -1.0]]
        c, sn = np.cos(t), np.sin(t)
        b[s, s] = [[c, sn], [sn, -c]]
    return a.astype(complex), b.astype(complex)


def reconstruction_errors(form: CanonicalForm, m1, m2) -> tuple[float, float, float]:
    """Max-entry errors of unitarity and of both block reconstructions."""
    u = form.basis_change
    a, b = assemble_blocks(form.angles)
    m1, m2 = as_matrix(m1), as_matrix(m2)
    unit = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
    e1 = np.max(np.abs(u @ m1 @ u.conj().T - a))
    e2 = np.max(np.abs(u @ m2 @ u.conj().T - b))
    return float(unit), float(e1), float(e2)
