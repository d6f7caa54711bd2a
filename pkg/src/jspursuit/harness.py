"""Monte Carlo experiment driver: success-rate sweeps, k95 curves, CSV output.

Each trial regenerates its problem from a stream derived by hashing the grid
point and trial index into the master seed, so results are independent of
execution order and of which other algorithms run in the same sweep.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import baselines, pursuit
from .matmodel import (
    RecoveryProblem,
    Seed,
    SignalSpec,
    add_noise,
    gen_gaussian_phi,
    gen_partial_dft,
    gen_spherical_phi,
    gen_signal,
    mix_stream,
)
from .subspace import RankPolicy

CSV_HEADER = "algo,m,n,l,r,k,snr_db,trials,successes,success_rate,mean_l2_err,mean_runtime_ms,seed"
K95_CSV_HEADER = "algo,m,n,l,r,k95,snr_db,trials,seed"

MATRIX_MODELS = ("gaussian", "spherical", "partial_dft")

_REGISTRY = {}


def register_solver(name, fn):
    """Plug a solver into the harness: fn(problem, k, params) -> RecoveryResult."""
    if not callable(fn):
        raise TypeError("solver must be callable")
    _REGISTRY[str(name)] = fn


def registered_solvers():
    return sorted(_REGISTRY)


def get_solver(name):
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown algorithm {name!r}; registered: {', '.join(registered_solvers())}"
        ) from None


def _tsmp2_gap(problem, k, params):
    """Sparsity-free two-stage variant: threshold picked at the largest score gap."""
    res = pursuit.tsmp1(problem, max(1, min(k, problem.m - 1)), params)
    kappa = pursuit.kappa_largest_gap(res.zeta)
    q = tuple(sorted(res.omega_c[t] for t in range(len(res.omega_c)) if res.zeta[t] > kappa))
    x_hat, deficient = pursuit._refit(problem.phi, problem.y, q)
    return pursuit.RecoveryResult(
        omega_hat=q,
        x_hat=x_hat,
        omega_c=res.omega_c,
        zeta=res.zeta,
        runtime_ms=res.runtime_ms,
        rank_deficient=deficient,
        algo="tsmp2_gap",
    )


register_solver("osmp", pursuit.osmp)
register_solver("tsmp1", pursuit.tsmp1)
register_solver("tsmp1_qr", pursuit.tsmp1_qr)
register_solver("tsmp2_gap", _tsmp2_gap)
register_solver("music", baselines.music)
register_solver("sa_music_osmp", baselines.sa_music_osmp)
register_solver("somp", baselines.somp)


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameter grid for one sweep."""

    m: int
    n: int
    l: int
    r: int
    k_grid: tuple[int, ...]
    snr_db: float = math.inf
    trials: int = 500
    seed: int = 0
    algos: tuple[str, ...] = ("tsmp1", "osmp", "music")
    field: str = "real"
    matrix_model: str = "gaussian"

    def __post_init__(self):
        object.__setattr__(self, "k_grid", tuple(int(k) for k in self.k_grid))
        object.__setattr__(self, "algos", tuple(self.algos))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.k_grid:
            raise ValueError("k_grid is empty")
        if self.r > min(min(self.k_grid), self.l):
            raise ValueError("r must not exceed min(k) or l")
        if self.matrix_model not in MATRIX_MODELS:
            raise ValueError(f"unknown matrix model {self.matrix_model!r}")
        for name in self.algos:
            get_solver(name)


@dataclass(frozen=True)
class SweepRow:
    algo: str
    m: int
    n: int
    l: int
    r: int
    k: int
    snr_db: float
    trials: int
    successes: int
    success_rate: float
    mean_l2_err: float
    mean_runtime_ms: float
    seed: int
    mean_frob_err: float = 0.0


def _gen_phi(config, seed):
    if config.matrix_model == "gaussian":
        return gen_gaussian_phi(config.m, config.n, 1.0, config.field, seed)
    if config.matrix_model == "spherical":
        return gen_spherical_phi(config.m, config.n, seed)
    return gen_partial_dft(config.m, config.n, seed)


def make_problem(config, k, trial_index):
    """Deterministic problem instance for one grid cell and trial."""
    stream = mix_stream(config.l, k, trial_index)
    base = Seed(config.seed, stream)
    phi = _gen_phi(config, base.sub(1))
    r_eff = min(config.r, k, config.l)
    sig_field = "complex" if config.matrix_model == "partial_dft" else config.field
    x0, omega = gen_signal(SignalSpec(config.n, config.l, k, r_eff), base.sub(2), sig_field)
    y_clean = phi @ x0
    y, _ = add_noise(y_clean, config.snr_db, base.sub(3))
    return RecoveryProblem(phi=phi, y=y, x0=x0, omega=omega, k=k), r_eff


def _params_for(config, r_eff):
    if math.isinf(config.snr_db) and config.snr_db > 0:
        return pursuit.PursuitParams(rank_policy=RankPolicy.auto())
    return pursuit.PursuitParams(rank_policy=RankPolicy.fixed(r_eff))


def _support_from_result(result, problem, k):
    """Normalize third-party results: derive a support or a signal if missing."""
    omega_hat = result.omega_hat
    x_hat = result.x_hat
    if omega_hat is None and x_hat is not None:
        rows = np.linalg.norm(x_hat, axis=1)
        order = sorted(range(len(rows)), key=lambda i: (-rows[i], i))
        omega_hat = tuple(sorted(order[:k]))
    if x_hat is None and omega_hat is not None:
        x_hat, _ = pursuit._refit(problem.phi, problem.y, omega_hat)
    return omega_hat, x_hat


def run_trial(config, algo, k, trial_index):
    """One (algorithm, sparsity, trial) cell; solver errors count as failures."""
    problem, r_eff = make_problem(config, k, trial_index)
    solver = get_solver(algo)
    params = _params_for(config, r_eff)
    try:
        result = solver(problem, k, params)
    except Exception as exc:  # noqa: BLE001 - a failed trial is data, not an abort
        return {
            "success": False,
            "l2_err": float("nan"),
            "frob_err": float("nan"),
            "runtime_ms": 0.0,
            "error": f"{type(exc).__name__}: {exc}",
        }
    omega_hat, x_hat = _support_from_result(result, problem, k)
    success = set(omega_hat) == set(problem.omega)
    diff = problem.x0 - x_hat
    return {
        "success": bool(success),
        "l2_err": float(np.linalg.norm(diff, ord=2)),
        "frob_err": float(np.linalg.norm(diff)),
        "runtime_ms": float(result.runtime_ms),
        "error": None,
    }


def _max_workers():
    raw = os.environ.get("JSPURSUIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_cell(config, algo, k):
    trials = range(config.trials)
    workers = _max_workers()
    if workers == 1:
        outs = [run_trial(config, algo, k, t) for t in trials]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(lambda t: run_trial(config, algo, k, t), trials))
    successes = sum(1 for o in outs if o["success"])
    l2 = [o["l2_err"] for o in outs if math.isfinite(o["l2_err"])]
    fro = [o["frob_err"] for o in outs if math.isfinite(o["frob_err"])]
    ms = [o["runtime_ms"] for o in outs]
    return SweepRow(
        algo=algo,
        m=config.m,
        n=config.n,
        l=config.l,
        r=min(config.r, k, config.l),
        k=k,
        snr_db=config.snr_db,
        trials=config.trials,
        successes=successes,
        success_rate=successes / config.trials,
        mean_l2_err=float(np.mean(l2)) if l2 else float("nan"),
        mean_runtime_ms=float(np.mean(ms)) if ms else 0.0,
        seed=config.seed,
        mean_frob_err=float(np.mean(fro)) if fro else float("nan"),
    )


def sweep(config):
    """One row per (algo, k) cell, rows ordered by algo list then ascending k."""
    rows = []
    for algo in config.algos:
        for k in sorted(config.k_grid):
            rows.append(_run_cell(config, algo, k))
    return rows


@dataclass(frozen=True)
class K95Row:
    algo: str
    m: int
    n: int
    l: int
    r: int
    k95: int
    snr_db: float
    trials: int
    seed: int


def k95(config, l_grid, threshold=0.95, stop_after=3, full_scan=False):
    """Largest sparsity with success rate above threshold, per algo and l.

    The rank parameter tracks l (clamped to k per instance). The scan walks k
    upward and, unless full_scan is set, stops after `stop_after` consecutive
    sub-threshold cells since success is near-monotone in k.
    """
    rows = []
    for algo in config.algos:
        for l in l_grid:
            l = int(l)
            best = 0
            misses = 0
            for k in range(1, config.m):
                cfg = replace(config, l=l, r=min(l, k), k_grid=(k,), algos=(algo,))
                cell = _run_cell(cfg, algo, k)
                if cell.success_rate > threshold:
                    best = k
                    misses = 0
                else:
                    misses += 1
                    if not full_scan and misses >= stop_after:
                        break
            rows.append(
                K95Row(algo=algo, m=config.m, n=config.n, l=l, r=l, k95=best,
                       snr_db=config.snr_db, trials=config.trials, seed=config.seed)
            )
    return rows


def _fmt(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def write_csv(rows, path, verbose=False):
    """Harness CSV with the exact schema header; verbose adds the Frobenius column."""
    header = CSV_HEADER + (",mean_frob_err" if verbose else "")
    cols = CSV_HEADER.split(",")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(header + "\n")
        for row in rows:
            vals = [_fmt(getattr(row, c)) for c in cols]
            if verbose:
                vals.append(_fmt(row.mean_frob_err))
            f.write(",".join(vals) + "\n")


def write_k95_csv(rows, path):
    cols = K95_CSV_HEADER.split(",")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(K95_CSV_HEADER + "\n")
        for row in rows:
            f.write(",".join(_fmt(getattr(row, c)) for c in cols) + "\n")


def read_csv(path):
    """Parse a harness CSV back into SweepRow values (round-trip helper)."""
    with open(path, encoding="utf-8") as f:
        lines = [ln.rstrip("\n") for ln in f if ln.strip()]
    if not lines or not lines[0].startswith(CSV_HEADER.split(",")[0]):
        raise ValueError("not a harness CSV")
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        vals = dict(zip(header, ln.split(",")))
        rows.append(
            SweepRow(
                algo=vals["algo"],
                m=int(vals["m"]),
                n=int(vals["n"]),
                l=int(vals["l"]),
                r=int(vals["r"]),
                k=int(vals["k"]),
                snr_db=float(vals["snr_db"]),
                trials=int(vals["trials"]),
                successes=int(vals["successes"]),
                success_rate=float(vals["success_rate"]),
                mean_l2_err=float(vals["mean_l2_err"]),
                mean_runtime_ms=float(vals["mean_runtime_ms"]),
                seed=int(vals["seed"]),
                mean_frob_err=float(vals.get("mean_frob_err", "nan")),
            )
        )
    return rows
