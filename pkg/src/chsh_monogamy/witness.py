"""Bell violation versus anticommuting observables.

If ``W`` acts on Bob's side, has spectrum in [-1, 1] and anticommutes with
every one of Bob's observables, then any correlation Bell operator with
quantum bound ``Q`` obeys ``<B> <= Q sqrt(1 - <W>^2)``.  For CHSH the
natural witnesses are the normalized commutators ``i[B1, B2]/2`` and
``i[A1, A2]/2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chsh import chsh_operator
from .linalg import as_matrix, density, expectation, kron
from .observables import DichotomicObservable, commutator_observable

CHSH_QUANTUM_BOUND = 2.0 * np.sqrt(2.0)
CHSH_COEFFICIENTS = np.array([[1.0, 1.0], [1.0, -1.0]])
ANTICOMMUTE_TOL = 1e-9


@dataclass(frozen=True)
class WitnessReport:
    bell_value: float
    witness_expectation: float
    bound: float
    residual: float


def anticommutes(w, bs: Sequence, tol: float = ANTICOMMUTE_TOL) -> bool:
    wm = as_matrix(w)
    worst = 0.0
    for b in bs:
        bm = as_matrix(b)
        if bm.shape != wm.shape:
            raise ValueError("witness and observables act on different dimensions")
        worst = max(worst, float(np.linalg.norm(wm @ bm + bm @ wm)))
    return worst <= tol


def _coefficient_matrix(coefficients) -> np.ndarray:
    # a two-party scenario carries identity rows/columns that must be empty here
    if hasattr(coefficients, "coefficients"):
        c = np.asarray(coefficients.coefficients, dtype=float)
        if c.ndim != 2:
            raise ValueError("witness bounds are defined for two-party scenarios")
        if np.any(c[0, :] != 0) or np.any(c[:, 0] != 0):
            raise ValueError("witness bounds need a pure correlation operator (no marginal terms)")
        return c[1:, 1:]
    return np.atleast_2d(np.asarray(coefficients, dtype=float))


def correlation_operator(coefficients, a_obs: Sequence, b_obs: Sequence) -> np.ndarray:
    """``sum_ij p_ij A_i (x) B_j``."""
    p = _coefficient_matrix(coefficients)
    if p.shape != (len(a_obs), len(b_obs)):
        raise ValueError(f"coefficient matrix {p.shape} does not match "
                         f"{len(a_obs)} x {len(b_obs)} observables")
    a_m = [as_matrix(a) for a in a_obs]
    b_m = [as_matrix(b) for b in b_obs]
    out = np.zeros((a_m[0].shape[0] * b_m[0].shape[0],) * 2, dtype=complex)
    for i, a in enumerate(a_m):
        for j, b in enumerate(b_m):
            if p[i, j]:
                out += p[i, j] * kron(a, b)
    return out


def witness_bound(rho, coefficients, a_obs: Sequence, b_obs: Sequence, w,
                  q: float = CHSH_QUANTUM_BOUND) -> WitnessReport:
    """Evaluate ``Q sqrt(1 - <W>^2) - <B>`` for a witness on Bob's side."""
    if not anticommutes(w, b_obs, ANTICOMMUTE_TOL):
        raise ValueError("witness does not anticommute with Bob's observables")
    op = correlation_operator(coefficients, a_obs, b_obs)
    da = as_matrix(a_obs[0]).shape[0]
    bell = expectation(rho, op)
    wv = expectation(rho, kron(np.eye(da), w))
    bound = q * float(np.sqrt(max(1.0 - wv * wv, 0.0)))
    return WitnessReport(bell, wv, bound, bound - bell)


def _require_projective(obs):
    for o in obs:
        if not (isinstance(o, DichotomicObservable) and o.projective):
            raise ValueError("commutator bounds require projective observables")


def local_commutator_bounds(rho, a_obs: Sequence, b_obs: Sequence,
                            normalization: str = "witness") -> tuple[float, float]:
    """Residuals of the one-sided commutator bounds on the CHSH value.

    With the default ``"witness"`` normalization, ``w = <i[X1, X2]/2>`` on
    one side and the bound is ``2 sqrt2 sqrt(1 - w^2) = 2 sqrt(2 - 2 w^2)``.
    ``"printed"`` uses the raw commutator magnitude ``|<[X1, X2]>| = 2|w|``
    inside ``2 sqrt(2 - |.|^2)``; it is stricter and is not implied by the
    witness inequality.

    Returns ``(residual_b, residual_a)``.
    """
    _require_projective(list(a_obs) + list(b_obs))
    if normalization not in ("witness", "printed"):
        raise ValueError(f"unknown normalization {normalization!r}")
    a1, a2 = a_obs
    b1, b2 = b_obs
    da, db = a1.dim, b1.dim
    bell = expectation(rho, chsh_operator(a1, a2, b1, b2))
    w_b = expectation(rho, kron(np.eye(da), commutator_observable(b1, b2)))
    w_a = expectation(rho, kron(commutator_observable(a1, a2), np.eye(db)))

    def bound(w):
        if normalization == "witness":
            return 2.0 * np.sqrt(max(2.0 - 2.0 * w * w, 0.0))
        return 2.0 * np.sqrt(max(2.0 - 4.0 * w * w, 0.0))

    return float(bound(w_b) - bell), float(bound(w_a) - bell)


def commutator_correlation(rho, a_obs: Sequence, b_obs: Sequence) -> float:
    """``|<[A1, A2] (x) [B1, B2]>|``."""
    a1, a2 = (as_matrix(a) for a in a_obs)
    b1, b2 = (as_matrix(b) for b in b_obs)
    op = kron(a1 @ a2 - a2 @ a1, b1 @ b2 - b2 @ b1)
    val = np.sum(op * density(rho).T)
    return float(abs(val))


def tsirelson_commutator_relation(rho, a_obs: Sequence, b_obs: Sequence) -> float:
    """Residual of ``<B> <= sqrt(4 + |<[A1, A2] (x) [B1, B2]>|)``."""
    _require_projective(list(a_obs) + list(b_obs))
    a1, a2 = a_obs
    b1, b2 = b_obs
    if a1.dim != a2.dim or b1.dim != b2.dim:
        raise ValueError("each party's observables must share a dimension")
    bell = expectation(rho, chsh_operator(a1, a2, b1, b2))
    return float(np.sqrt(4.0 + commutator_correlation(rho, a_obs, b_obs)) - bell)


def local_commutator_expectations(rho, a_obs: Sequence, b_obs: Sequence) -> tuple[float, float]:
    """``(<i[A1, A2]/2>, <i[B1, B2]/2>)``."""
    a1, a2 = a_obs
    b1, b2 = b_obs
    w_a = expectation(rho, kron(commutator_observable(a1, a2), np.eye(b1.dim)))
    w_b = expectation(rho, kron(np.eye(a1.dim), commutator_observable(b1, b2)))
    return w_a, w_b
