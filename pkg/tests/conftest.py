import itertools

import numpy as np
import pytest

SQRT2 = np.sqrt(2.0)
TSIRELSON = 2.0 * SQRT2

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)

# acceptance lines collected here and printed in the terminal summary
ACCEPTANCE_RESULTS = {}


def contract_expectation(amps, dims, local_ops):
    """<psi| op_1 (x) ... (x) op_n |psi> by explicit sums over basis indices.

    Deliberately loop-based: an oracle independent of kron/einsum paths.
    """
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    total = 0j
    ranges = [range(d) for d in dims]

    def flat(idx):
        out = 0
        for i, d in zip(idx, dims):
            out = out * d + i
        return out

    for row in itertools.product(*ranges):
        cr = np.conj(amps[flat(row)])
        if cr == 0:
            continue
        for col in itertools.product(*ranges):
            ac = amps[flat(col)]
            if ac == 0:
                continue
            coef = 1.0 + 0j
            for op, r, c in zip(local_ops, row, col):
                coef *= op[r, c]
                if coef == 0:
                    break
            total += cr * coef * ac
    return total


def contract_reduced(amps, dims, keep):
    """Reduced density matrix by explicit amplitude contraction."""
    amps = np.asarray(amps, dtype=complex).reshape(dims)
    keep = list(keep)
    kd = [dims[k] for k in keep]
    n = int(np.prod(kd))
    out = np.zeros((n, n), dtype=complex)
    traced = [k for k in range(len(dims)) if k not in keep]
    for r in itertools.product(*[range(d) for d in kd]):
        for c in itertools.product(*[range(d) for d in kd]):
            s = 0j
            for t in itertools.product(*[range(dims[k]) for k in traced]):
                ir = [0] * len(dims)
                ic = [0] * len(dims)
                for k, v in zip(keep, r):
                    ir[k] = v
                for k, v in zip(keep, c):
                    ic[k] = v
                for k, v in zip(traced, t):
                    ir[k] = ic[k] = v
                s += amps[tuple(ir)] * np.conj(amps[tuple(ic)])
            ri = int(np.ravel_multi_index(r, kd))
            ci = int(np.ravel_multi_index(c, kd))
            out[ri, ci] = s
    return out


def haar_unitary(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def singlet_vector():
    v = np.zeros(4, dtype=complex)
    v[1], v[2] = 1 / SQRT2, -1 / SQRT2
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[key])
