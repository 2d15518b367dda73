"""Command-line interface.

Exit codes: 0 success, 1 an invariant was violated, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

import numpy as np

from . import canonical, monogamy, regions, seesaw, witness
from .chsh import chsh_operator, lemma2_value
from .linalg import (PureState, matrix_from_json, matrix_to_json, state_from_json,
                     state_to_json)
from .observables import DichotomicObservable, commutator_observable, random_projective

DEFAULT_SEED = 42

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

JOINT_TARGET_TOL = 1e-6
DISC_TOL = 1e-9
COMMUTATION_TOL = 1e-10
WITNESS_TOL = 1e-8

log = logging.getLogger("chsh_monogamy")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _round(obj):
    """Round every float to 12 significant digits."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_round(obj), indent=2) + "\n"


def _read_json(path):
    if path in (None, "-"):
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit(text: str, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_canonicalize(args) -> int:
    obj = _read_json(args.input)
    m1 = DichotomicObservable(matrix_from_json(obj["m1"]))
    m2 = DichotomicObservable(matrix_from_json(obj["m2"]))
    b1, b2 = canonical.balance_pair(m1, m2)
    form = canonical.canonicalize_pair(b1, b2)
    out = form.to_json()
    out["balanced_dim"] = b1.dim
    _emit(_dump_json(out), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "value_ab", "value_ac", "sum_sq", "target",
                "target_residual", "disc_residual", "commutation_defect", "degenerate"])
    worst_l3 = worst_t1 = worst_comm = 0.0
    bad = 0
    for i in range(args.samples):
        psi = monogamy.random_real_state(rng)
        res = monogamy.joint_max(psi)
        target = monogamy.joint_target(psi)
        l3 = res.sum_of_squares - target
        t1 = monogamy.monogamy_residual(res.value_ab, res.value_ac)
        comm = monogamy.commutation_defect(psi)
        ok = t1 >= -DISC_TOL and comm <= COMMUTATION_TOL
        if not res.degenerate:
            ok = ok and abs(l3) <= JOINT_TARGET_TOL
        ok = ok and res.value_ab <= lemma2_value(psi, "AB") + DISC_TOL
        ok = ok and res.value_ac <= lemma2_value(psi, "AC") + DISC_TOL
        bad += not ok
        worst_l3 = max(worst_l3, abs(l3))
        worst_t1 = min(worst_t1, t1)
        worst_comm = max(worst_comm, comm)
        w.writerow([i, _fmt(res.value_ab), _fmt(res.value_ac), _fmt(res.sum_of_squares),
                    _fmt(target), _fmt(l3), _fmt(t1), _fmt(comm), int(res.degenerate)])
    status = "ok" if bad == 0 else "violation"
    buf.write(f"# summary samples={args.samples} seed={args.seed} violations={bad} "
              f"max_target_residual={_fmt(worst_l3)} min_disc_residual={_fmt(worst_t1)} "
              f"max_commutation_defect={_fmt(worst_comm)} status={status}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK if bad == 0 else EXIT_VIOLATION


def witness_sample(rng: np.random.Generator, max_dim: int = 8, mixed: bool = False):
    """One random (state, CHSH measurements) configuration on C^da (x) C^db.

    Every other draw uses the top eigenvector of the CHSH operator, so the
    sweep includes strongly violating states and not just random ones.
    """
    da = int(rng.integers(2, max_dim + 1))
    db = int(rng.integers(2, max_dim + 1))
    a_obs = [random_projective(da, rng) for _ in range(2)]
    b_obs = [random_projective(db, rng) for _ in range(2)]
    n = da * db
    if mixed:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        rho = g @ g.conj().T
        return rho / np.trace(rho).real, a_obs, b_obs
    if rng.random() < 0.5:
        # input generation only; LAPACK keeps 64-dim draws cheap
        op = chsh_operator(*a_obs, *b_obs)
        vec = np.linalg.eigh(op)[1][:, -1]
    else:
        vec = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState.from_vector((da, db), vec), a_obs, b_obs


def cmd_witness(args) -> int:
    rng = np.random.default_rng(args.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "dim_a", "dim_b", "bell_value", "witness_expectation", "bound",
                "residual", "local_residual_b", "local_residual_a", "tsirelson_residual"])
    bad = 0
    for i in range(args.samples):
        rho, a_obs, b_obs = witness_sample(rng, args.max_dim, mixed=args.mixed)
        wit = commutator_observable(*b_obs)
        rep = witness.witness_bound(rho, witness.CHSH_COEFFICIENTS, a_obs, b_obs, wit)
        rb, ra = witness.local_commutator_bounds(rho, a_obs, b_obs)
        ts = witness.tsirelson_commutator_relation(rho, a_obs, b_obs)
        bad += min(rep.residual, rb, ra, ts) < -WITNESS_TOL
        w.writerow([i, a_obs[0].dim, b_obs[0].dim, _fmt(rep.bell_value),
                    _fmt(rep.witness_expectation), _fmt(rep.bound), _fmt(rep.residual),
                    _fmt(rb), _fmt(ra), _fmt(ts)])
    _emit(buf.getvalue(), args.out)
    if bad:
        print(f"{bad} witness residual(s) below -{WITNESS_TOL:g}", file=sys.stderr)
    return EXIT_OK if bad == 0 else EXIT_VIOLATION


def cmd_seesaw(args) -> int:
    scenario = seesaw.BellScenario.from_json(_read_json(args.scenario))
    fixed = state_from_json(_read_json(args.fix_state)) if args.fix_state else None
    config = seesaw.SeesawConfig(max_iterations=args.max_iterations,
                                 convergence_tol=args.tol, restarts=args.restarts,
                                 seed=args.seed)
    res = seesaw.seesaw_maximize(scenario, config, fixed_state=fixed)
    out = {
        "value": res.value,
        "converged": res.converged,
        "iterations": len(res.value_trace),
        "value_trace": res.value_trace,
        "state": state_to_json(res.state),
        "observables": [[matrix_to_json(m) for m in pair] for pair in res.observables],
    }
    _emit(_dump_json(out), args.out)
    return EXIT_OK


def cmd_regions(args) -> int:
    if args.theory == "sample":
        pts = regions.random_cloud(args.samples, args.seed)
    else:
        pts = regions.boundary_samples(args.theory, args.samples)
    _emit(regions.to_csv(pts), args.out)
    return EXIT_OK


def cmd_tight_family(args) -> int:
    psi = monogamy.tight_family(args.t)
    res = monogamy.joint_max(psi)
    yy = monogamy.pair_expectations(psi)
    out = {
        "t": args.t,
        "values": [res.value_ab, res.value_ac],
        "expected": [2 * np.sqrt(2) * np.cos(args.t), 2 * np.sqrt(2) * np.sin(args.t)],
        "yy": {"ab": yy.yy_ab, "ac": yy.yy_ac, "bc": yy.yy_bc},
        "state": state_to_json(psi),
        "alice_dirs": [list(map(float, v)) for v in res.alice_dirs],
        "bob_dirs": [list(map(float, res.bob_meas.b1)), list(map(float, res.bob_meas.b2))],
        "charlie_dirs": [list(map(float, res.charlie_meas.b1)),
                         list(map(float, res.charlie_meas.b2))],
    }
    _emit(_dump_json(out), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chsh-monogamy", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write output here instead of stdout")
        return sp

    sp = add("canonicalize", cmd_canonicalize, "qubit-block form of an observable pair")
    sp.add_argument("--input", default="-", help='JSON {"m1": matrix, "m2": matrix}; default stdin')

    sp = add("verify", cmd_verify, "monogamy checks on random real three-qubit states")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sp = add("witness", cmd_witness, "anticommutation witness residuals on random configurations")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--max-dim", type=int, default=8)
    sp.add_argument("--mixed", action="store_true", help="use random mixed states")

    sp = add("seesaw", cmd_seesaw, "see-saw maximization of a Bell scenario")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--fix-state", help="optimize measurements only, for this state")
    sp.add_argument("--restarts", type=int, default=20)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--max-iterations", type=int, default=500)
    sp.add_argument("--tol", type=float, default=1e-13)

    sp = add("regions", cmd_regions, "boundary or sample points of the monogamy plane")
    sp.add_argument("--theory", required=True, choices=regions.THEORIES + ("sample",))
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sp = add("tight-family", cmd_tight_family, "tight-family state and its CHSH values")
    sp.add_argument("--t", type=float, required=True, help="radians in [0, pi/4]")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        print(f"chsh-monogamy {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())
