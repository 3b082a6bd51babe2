"""Command-line interface.

Subcommands: gen, solve, width, bound, experiment, verify. Exit codes:
0 success, 1 validation/usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bounds, harness
from .constraints import FeasibleSet, structure_value
from .exceptions import StrucRecError, ValidationError
from .geometry import euclidean_ball, gaussian_width_mc, l1_cap, sphere
from .measurement import NoiseSpec, gaussian_matrix, make_noise
from .rng import RngSpec
from .solvers import sign_invariant_error, solve_clad, solve_cls, solve_cnls


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    p = _Parser(prog="strucrec", description="structured signal recovery toolkit")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default $STRUCREC_THREADS or 1)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a sparse ground-truth signal")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--s", type=int, required=True)

    s = sub.add_parser("solve", help="solve one synthetic recovery instance")
    s.add_argument("--model", choices=("cls", "clad", "cnls"), required=True)
    s.add_argument("--n", type=int, default=128)
    s.add_argument("--s", type=int, default=5)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--kind", choices=("l0", "l1", "l2"), default="l1")
    s.add_argument("--eta-mult", type=float, default=1.0,
                   help="constraint radius as a multiple of f(x*)")
    s.add_argument("--noise-kind", default="none",
                   choices=("none", "gaussian", "sparse_adversarial",
                            "heavy_tailed_student_t"))
    s.add_argument("--sigma", type=float, default=0.0)
    s.add_argument("--fraction", type=float, default=0.0)
    s.add_argument("--magnitude", type=float, default=0.0)

    w = sub.add_parser("width", help="Monte Carlo Gaussian width")
    w.add_argument("--set", dest="set_name", required=True,
                   choices=("l2-ball", "sphere", "l1-cap"))
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--s", type=int, default=1, help="sparsity for l1-cap")
    w.add_argument("--samples", type=int, default=10000)

    b = sub.add_parser("bound", help="evaluate a stability bound")
    b.add_argument("--theorem", required=True,
                   choices=("cls1", "cls2", "cls-delta1", "cls-delta2",
                            "lad1", "lad2", "cnls1", "cnls2"))
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--m0", type=float, default=0.0)
    b.add_argument("--rho", type=float, default=None)
    b.add_argument("--u", type=float, default=0.1)
    b.add_argument("--delta", type=float, default=0.5)
    b.add_argument("--gamma", type=float, default=4.0)
    b.add_argument("--beta", type=float, default=26.0)
    b.add_argument("--eta", type=float, default=0.0)
    b.add_argument("--f-star", type=float, default=0.0)
    b.add_argument("--norm-x", type=float, default=0.0)
    b.add_argument("--proj-gap", type=float, default=0.0)
    b.add_argument("--noise-l2", type=float, default=0.0)
    b.add_argument("--noise-l1", type=float, default=0.0)

    e = sub.add_parser("experiment", help="run a configured experiment grid")
    e.add_argument("--config", required=True, help="JSON config file")
    e.add_argument("--experiment", default="mismatch",
                   choices=("mismatch", "phase", "robustness"))

    v = sub.add_parser("verify", help="bound coverage of a records CSV")
    v.add_argument("--records", required=True, help="CSV written by experiment")
    return p


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("STRUCREC_THREADS")
    return max(1, int(env)) if env else 1


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_gen(args) -> int:
    x = harness.gen_ground_truth(args.n, args.s, RngSpec(args.seed))
    if args.format == "json":
        _emit(args, json.dumps([float(v) for v in x]))
    else:
        _emit(args, "\n".join("%.17g" % v for v in x) + "\n")
    return 0


def _cmd_solve(args) -> int:
    base = RngSpec(args.seed)
    x_star = harness.gen_ground_truth(args.n, args.s, base.stream(0))
    A = gaussian_matrix(args.m, args.n, base.stream(1))
    spec = NoiseSpec(kind=args.noise_kind, sigma=args.sigma,
                     fraction=args.fraction, magnitude=args.magnitude)
    e = make_noise(spec, args.m, base.stream(2))
    f_star = structure_value(args.kind, x_star)
    eta = args.eta_mult * f_star
    if args.kind == "l0":
        eta = max(1.0, round(eta))
    K = FeasibleSet(args.kind, eta)
    if args.model == "cnls":
        y = np.abs(A @ x_star) + e
        res = solve_cnls(A, y, K, harness.ExperimentConfig(
            model="cnls", n=args.n, s=args.s).solver_options())
        err = sign_invariant_error(res.x_hat, x_star)
    elif args.model == "clad":
        y = A @ x_star + e
        res = solve_clad(A, y, K)
        err = float(np.linalg.norm(res.x_hat - x_star))
    else:
        y = A @ x_star + e
        res = solve_cls(A, y, K)
        err = float(np.linalg.norm(res.x_hat - x_star))
    out = {"model": args.model, "m": args.m, "n": args.n, "eta": eta,
           "error": err, "iterations": res.iterations,
           "converged": bool(res.converged)}
    _emit(args, json.dumps(out, indent=2))
    return 0


def _cmd_width(args) -> int:
    if args.set_name == "l2-ball":
        spec = euclidean_ball(args.n)
    elif args.set_name == "sphere":
        spec = sphere(args.n)
    else:
        spec = l1_cap(args.s, args.n)
    est = gaussian_width_mc(spec, args.samples, RngSpec(args.seed))
    _emit(args, json.dumps({
        "set": est.set_label, "mean": est.mean, "stderr": est.stderr,
        "samples": est.samples,
    }, indent=2))
    return 0


_BOUND_FNS = {
    "cls1": bounds.bound_cls_case1,
    "cls2": bounds.bound_cls_case2,
    "cls-delta1": bounds.bound_cls_delta_case1,
    "cls-delta2": bounds.bound_cls_delta_case2,
    "lad1": bounds.bound_clad_case1,
    "lad2": bounds.bound_clad_case2,
    "cnls1": bounds.bound_cnls_case1,
    "cnls2": bounds.bound_cnls_case2,
}


def _cmd_bound(args) -> int:
    inputs = bounds.BoundInputs(
        m=args.m, m0=args.m0, u=args.u, delta=args.delta, gamma=args.gamma,
        beta=args.beta, eta=args.eta, f_star=args.f_star,
        norm_x_star=args.norm_x, proj_gap=args.proj_gap,
        noise_l2=args.noise_l2, noise_l1=args.noise_l1, rho=args.rho,
    )
    rep = _BOUND_FNS[args.theorem](inputs)
    print("%.6g" % rep.value)
    return 0


def _cmd_experiment(args) -> int:
    if not os.path.exists(args.config):
        raise ValidationError("config file not found: %s" % args.config)
    cfg = harness.load_config(args.config)
    threads = _threads(args)
    if args.experiment == "phase":
        points = harness.run_phase_transition(cfg, threads=threads)
        if args.format == "json":
            _emit(args, json.dumps([p.__dict__ for p in points], indent=2))
        else:
            lines = ["m,success_rate,m0_estimate"]
            lines += ["%d,%.17g,%.17g" % (p.m, p.success_rate, p.m0_estimate)
                      for p in points]
            _emit(args, "\n".join(lines) + "\n")
        return 0
    if args.experiment == "robustness":
        records = harness.run_robustness_comparison(cfg, threads=threads)
    else:
        records = harness.run_mismatch_sweep(cfg, threads=threads)
    if args.format == "json":
        _emit(args, harness.records_to_json(records))
    else:
        _emit(args, harness.records_to_csv(records))
    return 0


def _cmd_verify(args) -> int:
    if not os.path.exists(args.records):
        raise ValidationError("records file not found: %s" % args.records)
    with open(args.records, "r", encoding="utf-8") as fh:
        records = harness.records_from_csv(fh.read())
    cells = harness.verify_bounds(records)
    rows = []
    for c in cells:
        row = dict(c.__dict__)
        if row["coverage"] != row["coverage"]:  # NaN: no applicable bound
            row["coverage"] = None
        rows.append(row)
    _emit(args, json.dumps(rows, indent=2))
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "width": _cmd_width,
    "bound": _cmd_bound,
    "experiment": _cmd_experiment,
    "verify": _cmd_verify,
}


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1
    except FileNotFoundError as exc:
        sys.stderr.write("error: file not found: %s\n" % exc)
        return 1
    except StrucRecError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        sys.stderr.write("internal error: %s\n" % exc)
        return 2


def main():
    raise SystemExit(cli_main())
