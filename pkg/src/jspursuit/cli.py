"""Command line entry point: gen | solve | sweep | k95 | diagnose | bounds.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

import argparse
import json
import math
import sys

from . import diagnostics, harness, mmio, pursuit
from .matmodel import (
    RecoveryProblem,
    Seed,
    SignalSpec,
    add_noise,
    gen_gaussian_phi,
    gen_partial_dft,
    gen_signal,
    gen_spherical_phi,
)


def _parse_snr(text):
    if text in ("inf", "Inf", "INF", "infinity"):
        return math.inf
    return float(text)


def _int_list(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _add_gen(sub):
    p = sub.add_parser("gen", help="generate a problem instance as manifest + .mtx files")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--snr", default="inf", help="SNR in dB, or 'inf'")
    p.add_argument("--model", default="gaussian", choices=harness.MATRIX_MODELS)
    p.add_argument("--field", default="real", choices=("real", "complex"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="manifest path (.json)")


def _add_solve(sub):
    p = sub.add_parser("solve", help="run one solver on a stored problem")
    p.add_argument("--problem", required=True, help="manifest path")
    p.add_argument("--algo", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--kappa", type=float, help="threshold for tsmp2")
    p.add_argument("--out", required=True, help="result JSON path")


def _add_sweep(sub):
    p = sub.add_parser("sweep", help="Monte Carlo success-rate sweep to CSV")
    p.add_argument("--config", help="JSON config file (overridden by flags)")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--k-grid", type=_int_list)
    p.add_argument("--snr", default=None)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--algos", help="comma-separated solver names")
    p.add_argument("--field", choices=("real", "complex"))
    p.add_argument("--model", choices=harness.MATRIX_MODELS)
    p.add_argument("--verbose-cols", action="store_true",
                   help="append the mean Frobenius error column")
    p.add_argument("--out", required=True, help="CSV output path")


def _add_k95(sub):
    p = sub.add_parser("k95", help="max sparsity with >95%% success, per l")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l-grid", type=_int_list, required=True)
    p.add_argument("--snr", default="inf")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algos", default="tsmp1_qr")
    p.add_argument("--model", default="gaussian", choices=harness.MATRIX_MODELS)
    p.add_argument("--field", default="real", choices=("real", "complex"))
    p.add_argument("--threshold", type=float, default=0.95)
    p.add_argument("--full-scan", action="store_true")
    p.add_argument("--out", required=True)


def _add_diagnose(sub):
    p = sub.add_parser("diagnose", help="recoverability measures of a .mtx matrix")
    p.add_argument("--matrix", required=True, help=".mtx path")
    p.add_argument("--budget", type=int, default=diagnostics.DEFAULT_MAX_SUBSETS)
    p.add_argument("--lcp-delta", type=_int_list, help="delta index set for the LCP")
    p.add_argument("--lcp-gamma", type=_int_list, default=(), help="gamma index set")
    p.add_argument("--wrip-j", type=_int_list, help="fixed column set for the WRIP")
    p.add_argument("--wrip-b", type=int, help="superset excess for the WRIP")
    p.add_argument("--omega", type=_int_list, help="support for a1/a2/a3")
    p.add_argument("--v1", type=int, default=0)
    p.add_argument("--out", help="JSON output path (default: stdout)")


def _add_bounds(sub):
    p = sub.add_parser("bounds", help="sample-complexity bound calculators")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--smin-pool", type=float)
    p.add_argument("--pool-size", type=int)
    p.add_argument("--out", help="JSON output path (default: stdout)")


def _cmd_gen(args):
    base = Seed(args.seed)
    phi_seed, sig_seed, noise_seed = base.sub(1), base.sub(2), base.sub(3)
    if args.model == "gaussian":
        phi = gen_gaussian_phi(args.m, args.n, 1.0, args.field, phi_seed)
    elif args.model == "spherical":
        phi = gen_spherical_phi(args.m, args.n, phi_seed)
    else:
        phi = gen_partial_dft(args.m, args.n, phi_seed)
    field = "complex" if args.model == "partial_dft" else args.field
    x0, omega = gen_signal(SignalSpec(args.n, args.l, args.k, args.r), sig_seed, field)
    y, _ = add_noise(phi @ x0, _parse_snr(args.snr), noise_seed)
    problem = RecoveryProblem(phi=phi, y=y, x0=x0, omega=omega, k=args.k)
    mmio.save_problem(args.out, problem)
    print(f"wrote {args.out}")
    return 0


def _cmd_solve(args):
    problem = mmio.load_problem(args.problem)
    if args.algo == "tsmp2":
        if args.kappa is None:
            raise ValueError("tsmp2 requires --kappa")
        result = pursuit.tsmp2(problem, args.kappa)
    else:
        solver = harness.get_solver(args.algo)
        k = args.k if args.k is not None else problem.k
        if k is None:
            raise ValueError("--k is required when the problem stores no sparsity")
        result = solver(problem, k, pursuit.PursuitParams())
    entry = mmio.save_result(args.out, result)
    print(json.dumps({"algo": entry["algo"], "omega_hat": entry["omega_hat"],
                      "runtime_ms": entry["runtime_ms"]}))
    return 0


def _sweep_config(args):
    raw = {}
    if args.config:
        with open(args.config, encoding="utf-8") as f:
            raw = json.load(f)
    overrides = {
        "m": args.m,
        "n": args.n,
        "l": args.l,
        "r": args.r,
        "k_grid": args.k_grid,
        "snr_db": _parse_snr(args.snr) if args.snr is not None else None,
        "trials": args.trials,
        "seed": args.seed,
        "algos": tuple(args.algos.split(",")) if args.algos else None,
        "field": args.field,
        "matrix_model": args.model,
    }
    for key, val in overrides.items():
        if val is not None:
            raw[key] = val
    if "snr_db" in raw and isinstance(raw["snr_db"], str):
        raw["snr_db"] = _parse_snr(raw["snr_db"])
    if "k_grid" in raw:
        raw["k_grid"] = tuple(raw["k_grid"])
    if "algos" in raw:
        raw["algos"] = tuple(raw["algos"])
    return harness.ExperimentConfig(**raw)


def _cmd_sweep(args):
    config = _sweep_config(args)
    rows = harness.sweep(config)
    harness.write_csv(rows, args.out, verbose=args.verbose_cols)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_k95(args):
    config = harness.ExperimentConfig(
        m=args.m,
        n=args.n,
        l=1,
        r=1,
        k_grid=(1,),
        snr_db=_parse_snr(args.snr),
        trials=args.trials,
        seed=args.seed,
        algos=tuple(args.algos.split(",")),
        field=args.field,
        matrix_model=args.model,
    )
    rows = harness.k95(config, args.l_grid, threshold=args.threshold,
                       full_scan=args.full_scan)
    harness.write_k95_csv(rows, args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def _cmd_diagnose(args):
    a = mmio.load_matrix(args.matrix)
    exhaustive = True
    try:
        kr = diagnostics.krank(a, max_subsets=args.budget)
    except diagnostics.BudgetExceededError:
        kr = None
        exhaustive = False
    coherence = diagnostics.mutual_coherence(a)
    lcp_val = None
    if args.lcp_delta:
        lcp_val = diagnostics.lcp(a, args.lcp_delta, args.lcp_gamma)
    wrip_val = None
    if args.wrip_j is not None and args.wrip_b is not None:
        try:
            wrip_val = diagnostics.wrip_constant(a, args.wrip_j, args.wrip_b,
                                                 max_subsets=args.budget).delta
        except diagnostics.BudgetExceededError:
            exhaustive = False
    a1 = a2 = a3 = None
    if args.omega:
        try:
            a1, a2, a3 = diagnostics.theorem3_quantities(a, args.omega, args.v1,
                                                         max_subsets=args.budget)
        except diagnostics.BudgetExceededError:
            exhaustive = False
    report = diagnostics.MeasureReport(
        krank=kr, coherence=coherence, lcp=lcp_val, wrip=wrip_val,
        a1=a1, a2=a2, a3=a3, exhaustive=exhaustive,
    )
    text = json.dumps(report.to_dict(), indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_bounds(args):
    inputs = diagnostics.BoundInputs(
        k=args.k, n=args.n, r=args.r, eta=args.eta, epsilon=args.epsilon,
        t=args.t, sigma=args.sigma,
    )
    out = diagnostics.sample_bounds(
        inputs, kappa=args.kappa, smin_pool=args.smin_pool, pool_size=args.pool_size
    )
    text = json.dumps(out, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "k95": _cmd_k95,
    "diagnose": _cmd_diagnose,
    "bounds": _cmd_bounds,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jspursuit",
        description="Joint sparse recovery: greedy subspace pursuit toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_gen(sub)
    _add_solve(sub)
    _add_sweep(sub)
    _add_k95(sub)
    _add_diagnose(sub)
    _add_bounds(sub)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, KeyError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
