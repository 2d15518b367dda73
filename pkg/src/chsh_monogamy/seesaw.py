"""See-saw maximization of correlation Bell operators.

A Bell scenario has ``m`` parties with two dichotomic measurements each.
Its operator is ``sum c[i1, ..., im] M_{1,i1} (x) ... (x) M_{m,im}`` with
index 0 standing for the identity.  The see-saw alternates two exact
maximizations: the state becomes the top eigenvector of the operator, and
each observable becomes the eigen-sign of its effective operator.  Both
steps can only increase the value, so the trace is monotone.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .canonical import assemble_blocks
from .linalg import PureState, as_matrix, hermitian_eig, kron_all
from .observables import DichotomicObservable

log = logging.getLogger(__name__)

_MONOTONE_SLACK = 1e-12


@dataclass(frozen=True)
class BellScenario:
    num_parties: int
    local_dims: tuple
    coefficients: np.ndarray

    def __post_init__(self):
        m = int(self.num_parties)
        dims = tuple(int(d) for d in self.local_dims)
        if m < 1 or len(dims) != m or any(d < 1 for d in dims):
            raise ValueError("local_dims must list one positive dimension per party")
        c = np.asarray(self.coefficients, dtype=float)
        if c.size != 3 ** m:
            raise ValueError(f"{m} parties need 3^{m} = {3 ** m} coefficients, got {c.size}")
        c = c.reshape((3,) * m)
        c.setflags(write=False)
        object.__setattr__(self, "num_parties", m)
        object.__setattr__(self, "local_dims", dims)
        object.__setattr__(self, "coefficients", c)

    def terms(self):
        """Nonzero ``(index tuple, coefficient)`` pairs."""
        for idx in zip(*np.nonzero(self.coefficients)):
            yield tuple(int(i) for i in idx), float(self.coefficients[idx])

    def to_json(self) -> dict:
        return {"num_parties": self.num_parties, "local_dims": list(self.local_dims),
                "coefficients": [float(x) for x in self.coefficients.reshape(-1)]}

    @classmethod
    def from_json(cls, obj: dict) -> "BellScenario":
        return cls(int(obj["num_parties"]), tuple(obj["local_dims"]), obj["coefficients"])


def chsh_scenario(local_dims=(2, 2)) -> BellScenario:
    c = np.zeros((3, 3))
    c[1, 1] = c[1, 2] = c[2, 1] = 1.0
    c[2, 2] = -1.0
    return BellScenario(2, tuple(local_dims), c)


def monogamy_scenario(c_ab: float, c_ac: float, local_dims=(2, 2, 2)) -> BellScenario:
    """``c_ab B_AB (x) I + c_ac B_AC`` as a three-party scenario."""
    c = np.zeros((3, 3, 3))
    for (i, j), s in {(1, 1): 1.0, (1, 2): 1.0, (2, 1): 1.0, (2, 2): -1.0}.items():
        c[i, j, 0] += c_ab * s
        c[i, 0, j] += c_ac * s
    return BellScenario(3, tuple(local_dims), c)


@dataclass(frozen=True)
class SeesawConfig:
    max_iterations: int = 500
    convergence_tol: float = 1e-13
    restarts: int = 20
    seed: int = 42

    def __post_init__(self):
        if self.max_iterations < 1 or self.restarts < 1:
            raise ValueError("max_iterations and restarts must be positive")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")


@dataclass
class SeesawResult:
    value: float
    state: PureState
    observables: list
    value_trace: list = field(default_factory=list)
    converged: bool = True


def _local_ops(obs_pair, dim: int) -> list[np.ndarray]:
    return [np.eye(dim, dtype=complex)] + [as_matrix(m) for m in obs_pair]


def _check_observables(scenario: BellScenario, observables) -> list[list[np.ndarray]]:
    if len(observables) != scenario.num_parties:
        raise ValueError("need one observable pair per party")
    ops = []
    for k, (pair, dim) in enumerate(zip(observables, scenario.local_dims)):
        if len(pair) != 2:
            raise ValueError(f"party {k} needs exactly two observables")
        local = _local_ops(pair, dim)
        if any(m.shape != (dim, dim) for m in local):
            raise ValueError(f"party {k} observables do not match local dimension {dim}")
        ops.append(local)
    return ops


def build_bell_operator(scenario: BellScenario, observables) -> np.ndarray:
    ops = _check_observables(scenario, observables)
    n = int(np.prod(scenario.local_dims))
    out = np.zeros((n, n), dtype=complex)
    for idx, c in scenario.terms():
        out += c * kron_all(ops[k][i] for k, i in enumerate(idx))
    return out


def _apply_local(psi: np.ndarray, k: int, op: np.ndarray) -> np.ndarray:
    """Apply ``op`` to axis ``k`` of the state tensor."""
    return np.moveaxis(np.tensordot(op, psi, axes=([1], [k])), 0, k)


def effective_operator(scenario: BellScenario, state, observables, party: int,
                       meas: int) -> np.ndarray:
    """Hermitian ``F`` with ``<B> = tr(M_{party,meas} F) + (terms without that observable)``."""
    if not 0 <= party < scenario.num_parties:
        raise IndexError(f"party {party} out of range")
    if meas not in (1, 2):
        raise IndexError("measurement index must be 1 or 2")
    ops = _check_observables(scenario, observables)
    dims = scenario.local_dims
    amps = state.amplitudes if isinstance(state, PureState) else np.asarray(state, complex)
    psi = amps.reshape(dims)
    dk = dims[party]
    f = np.zeros((dk, dk), dtype=complex)
    psi_mat = np.moveaxis(psi, party, 0).reshape(dk, -1)
    for idx, c in scenario.terms():
        if idx[party] != meas:
            continue
        phi = psi
        for k, i in enumerate(idx):
            if k != party and i != 0:
                phi = _apply_local(phi, k, ops[k][i])
        phi_mat = np.moveaxis(phi, party, 0).reshape(dk, -1)
        # <psi| M (x) O |psi> = tr(M F) with F = (O psi)(psi)^H over the other factors
        f += c * (phi_mat @ psi_mat.conj().T)
    return 0.5 * (f + f.conj().T)


def sign_observable(f) -> DichotomicObservable:
    """Maximizer of ``tr(M F)`` over observables: eigen-sign of ``F``, sign(0) = +1."""
    eig = hermitian_eig(f)
    signs = np.where(eig.eigenvalues >= 0, 1.0, -1.0)
    v = eig.eigenvectors
    return DichotomicObservable((v * signs) @ v.conj().T)


def random_real_observable_pair(dim: int, rng: np.random.Generator):
    """Random orthogonal conjugate of a planar block pair (odd dims get a +1 tail)."""
    from scipy.stats import ortho_group

    d = dim // 2
    a, b = assemble_blocks(rng.uniform(0.0, np.pi, d))
    if dim % 2:
        a = np.pad(a, ((0, 1), (0, 1)))
        b = np.pad(b, ((0, 1), (0, 1)))
        a[-1, -1] = b[-1, -1] = 1.0
    o = ortho_group.rvs(dim, random_state=rng) if dim > 1 else np.eye(1)
    return (DichotomicObservable(o @ a @ o.T), DichotomicObservable(o @ b @ o.T))


def _single_run(scenario, obs, fixed, config) -> SeesawResult:
    dims = scenario.local_dims
    psi = fixed
    trace = []
    converged = False
    for _ in range(config.max_iterations):
        if fixed is None:
            value, vec = _top(build_bell_operator(scenario, obs))
            psi = PureState(dims, vec)
            trace_value_checkpoint = value
        for k in range(scenario.num_parties):
            pair = list(obs[k])
            for i in (1, 2):
                f = effective_operator(scenario, psi, obs, k, i)
                pair[i - 1] = sign_observable(f)
                obs[k] = tuple(pair)
        value = float(np.vdot(psi.amplitudes,
                              build_bell_operator(scenario, obs) @ psi.amplitudes).real)
        if fixed is None and value < trace_value_checkpoint - _MONOTONE_SLACK:
            log.warning("see-saw value decreased within an iteration")
        if trace and value - trace[-1] < config.convergence_tol:
            trace.append(max(value, trace[-1]))
            converged = True
            break
        trace.append(value)
    return SeesawResult(trace[-1], psi, obs, trace, converged)


def _top(h: np.ndarray) -> tuple[float, np.ndarray]:
    eig = hermitian_eig(h)
    return float(eig.eigenvalues[-1]), eig.eigenvectors[:, -1]


def seesaw_maximize(scenario: BellScenario, config: SeesawConfig = SeesawConfig(),
                    fixed_state: PureState | None = None,
                    initial_observables: Sequence | None = None) -> SeesawResult:
    """Best see-saw value over ``config.restarts`` seeded random starts.

    With ``fixed_state`` only the observables are optimized.
    """
    if fixed_state is not None and fixed_state.factor_dims != scenario.local_dims:
        raise ValueError("fixed state does not match the scenario's local dimensions")
    if not any(True for _ in scenario.terms()):
        dims = scenario.local_dims
        amps = np.zeros(int(np.prod(dims)))
        amps[0] = 1.0
        state = fixed_state or PureState(dims, amps)
        eye_pairs = [(DichotomicObservable(np.eye(d)), DichotomicObservable(np.eye(d)))
                     for d in dims]
        return SeesawResult(0.0, state, eye_pairs, [0.0], True)

    rng = np.random.default_rng(config.seed)
    best = None
    for r in range(config.restarts):
        if initial_observables is not None and r == 0:
            obs = [tuple(p) for p in initial_observables]
        else:
            obs = [random_real_observable_pair(d, rng) for d in scenario.local_dims]
        res = _single_run(scenario, obs, fixed_state, config)
        if best is None or res.value > best.value:
            best = res
    if not best.converged:
        log.info("see-saw hit max_iterations without meeting convergence_tol")
    return best


def deterministic_values(scenario: BellScenario) -> np.ndarray:
    """Bell values of every deterministic local strategy (outputs +-1 per setting)."""
    vals = []
    strategies = list(itertools.product((1.0, -1.0), repeat=2))
    for choice in itertools.product(strategies, repeat=scenario.num_parties):
        total = 0.0
        for idx, c in scenario.terms():
            term = c
            for k, i in enumerate(idx):
                if i:
                    term *= choice[k][i - 1]
            total += term
        vals.append(total)
    return np.array(vals)
