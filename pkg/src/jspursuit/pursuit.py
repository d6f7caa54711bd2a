"""Greedy subspace pursuit solvers.

The selection kernel picks, at each step, the column whose direction after
projecting out the already-selected columns best aligns with the similarly
projected signal subspace. On top of it sit the one-stage solver (k selection
steps) and the two-stage solvers (a pool of m-1 candidates pruned by
least-squares row norms, either top-k or by threshold), plus a QR-update fast
path that keeps the per-step cost independent of the sparsity level.
"""

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .matmodel import check_matrix
from .subspace import RankPolicy, SubspaceBasis, estimate_signal_subspace, orthonormal_basis


class ExhaustedCandidatesError(RuntimeError):
    """Raised when fewer admissible columns remain than selections requested."""


@dataclass(frozen=True)
class PursuitParams:
    """Knobs shared by all solvers.

    tie_break is fixed to lowest-index so runs are deterministic; zero_col_tol
    is the relative norm below which a projected column counts as lying inside
    the span of the selected columns (such columns are skipped). Scores within
    tie_tol of the maximum count as tied: the selection ratio is a cosine in
    [0, 1] and exact mathematical ties (e.g. several true columns all scoring
    1 in the noiseless case) land at distance ~1e-16 in floats, so resolving
    them by float argmax would be arbitrary.
    """

    rank_policy: RankPolicy | None = None
    tie_break: str = "lowest"
    zero_col_tol: float = 1e-12
    tie_tol: float = 1e-9

    def __post_init__(self):
        if self.tie_break != "lowest":
            raise ValueError("only lowest-index tie breaking is supported")
        if self.zero_col_tol <= 0:
            raise ValueError("zero_col_tol must be positive")
        if self.tie_tol < 0:
            raise ValueError("tie_tol must be nonnegative")


def argmax_lowest(scores, tie_tol):
    """Index of the maximal score; ties within tie_tol go to the lowest index."""
    best = float(np.max(scores))
    return int(np.flatnonzero(scores >= best - tie_tol)[0])


@dataclass(frozen=True)
class RecoveryResult:
    """Solver output: estimated support, refit signal, scores, and timing."""

    omega_hat: tuple[int, ...]
    x_hat: np.ndarray
    omega_c: tuple[int, ...] | None = None
    zeta: np.ndarray | None = None
    runtime_ms: float = 0.0
    rank_deficient: bool = False
    algo: str = ""


def least_squares_rows(phi_j, y):
    """Minimum-Frobenius-norm solution of min ||y - phi_j x||_F."""
    phi_j = np.asarray(phi_j)
    y = np.asarray(y)
    if phi_j.shape[0] != y.shape[0]:
        raise ValueError("phi_j and y row counts differ")
    x, _, _, _ = np.linalg.lstsq(phi_j, y, rcond=None)
    return x


def _lstsq_with_rank(phi_j, y):
    x, _, rank, _ = np.linalg.lstsq(phi_j, y, rcond=None)
    return x, int(rank)


def _refit(phi, y, omega_hat):
    """Least-squares refit on a final support; zero rows elsewhere."""
    n, l = phi.shape[1], y.shape[1]
    dtype = np.result_type(phi.dtype, y.dtype)
    x_hat = np.zeros((n, l), dtype=dtype)
    if len(omega_hat) == 0:
        return x_hat, False
    cols = list(omega_hat)
    sol, rank = _lstsq_with_rank(phi[:, cols], y)
    x_hat[cols, :] = sol
    return x_hat, rank < len(cols)


def submp(s_hat, phi, gamma0, s, params=None):
    """Greedy selection kernel: s indices extending gamma0, in selection order.

    At each step the score of a candidate column is the ratio between the norm
    of its projection onto the selected-column-complement part of the signal
    subspace and the norm of its own projection onto that complement. Columns
    whose complement projection is negligible are inadmissible. Ties go to the
    lowest index.
    """
    if params is None:
        params = PursuitParams()
    phi = check_matrix(phi, "phi")
    basis = s_hat.basis if isinstance(s_hat, SubspaceBasis) else SubspaceBasis(s_hat).basis
    m, n = phi.shape
    gamma0 = [int(i) for i in gamma0]
    if s < 1:
        raise ValueError("s must be >= 1")
    if len(gamma0) + s > n:
        raise ExhaustedCandidatesError(
            f"cannot select {s} new indices: only {n - len(gamma0)} columns remain"
        )

    taken = np.zeros(n, dtype=bool)
    taken[gamma0] = True
    col_norms = np.linalg.norm(phi, axis=0)

    q_sel = orthonormal_basis(phi[:, gamma0]) if gamma0 else np.zeros((m, 0), dtype=phi.dtype)
    # Residuals of the dictionary and of the subspace basis against R(phi_gamma),
    # maintained incrementally as columns join the selection.
    t = phi - q_sel @ (q_sel.conj().T @ phi) if q_sel.shape[1] else phi.astype(
        np.result_type(phi.dtype, basis.dtype), copy=True
    )
    b = basis - q_sel @ (q_sel.conj().T @ basis) if q_sel.shape[1] else basis.copy()

    picked = []
    for _ in range(s):
        denom = np.linalg.norm(t, axis=0)
        admissible = (~taken) & (denom > params.zero_col_tol * col_norms)
        if not np.any(admissible):
            raise ExhaustedCandidatesError("no admissible columns remain")
        # scale=1: the subspace basis is orthonormal, so once its residual is
        # uniformly tiny the projected subspace is gone and all scores are 0.
        u = orthonormal_basis(b, scale=1.0)
        scores = np.full(n, -1.0)
        if u.shape[1]:
            numer = np.linalg.norm(u.conj().T @ t, axis=0)
            scores[admissible] = numer[admissible] / denom[admissible]
        else:
            scores[admissible] = 0.0
        pick = argmax_lowest(scores, params.tie_tol)
        picked.append(pick)
        taken[pick] = True

        q_new = t[:, pick] / denom[pick]
        if q_sel.shape[1]:  # one re-orthogonalization pass against accumulated drift
            q_new = q_new - q_sel @ (q_sel.conj().T @ q_new)
            nq = np.linalg.norm(q_new)
            if nq <= params.zero_col_tol:
                continue
            q_new = q_new / nq
        q_new = q_new.reshape(-1, 1)
        t = t - q_new @ (q_new.conj().T @ t)
        b = b - q_new @ (q_new.conj().T @ b)
        q_sel = np.hstack([q_sel, q_new]) if q_sel.shape[1] else q_new
    return picked


def _estimate(problem, params):
    policy = params.rank_policy if params.rank_policy is not None else RankPolicy.auto()
    return estimate_signal_subspace(problem.y, policy)


def osmp(problem, k, params=None):
    """One-stage solver: k greedy selections on the estimated signal subspace."""
    if params is None:
        params = PursuitParams()
    m, n = problem.phi.shape
    if k < 1 or k > min(m - 1, n):
        raise ValueError(f"k={k} out of range for ({m}, {n}) measurements")
    t0 = time.perf_counter()
    s_hat = _estimate(problem, params)
    picked = submp(s_hat, problem.phi, (), k, params)
    omega_hat = tuple(sorted(picked))
    x_hat, deficient = _refit(problem.phi, problem.y, omega_hat)
    ms = (time.perf_counter() - t0) * 1e3
    return RecoveryResult(
        omega_hat=omega_hat, x_hat=x_hat, runtime_ms=ms, rank_deficient=deficient, algo="osmp"
    )


def _pool_scores(phi, y, pool):
    """Least-squares fit on the candidate pool and per-row score norms."""
    cols = list(pool)
    x_bar, rank = _lstsq_with_rank(phi[:, cols], y)
    zeta = np.linalg.norm(x_bar, axis=1)
    return x_bar, zeta, rank < len(cols)


def _top_k(pool, zeta, k):
    order = sorted(range(len(pool)), key=lambda t: (-zeta[t], pool[t]))
    return sorted(pool[t] for t in order[:k])


def esms1(phi, y, j, k):
    """Support and signal from a candidate pool: keep the k largest row scores.

    Returns (q, x_hat) where q is the selected support (sorted tuple) and
    x_hat the least-squares refit on q, zero elsewhere.
    """
    j = [int(i) for i in j]
    if k < 0 or k > len(j):
        raise ValueError(f"k={k} out of range for a pool of {len(j)}")
    _, zeta, _ = _pool_scores(phi, y, j)
    q = tuple(_top_k(j, zeta, k))
    x_hat, _ = _refit(phi, y, q)
    return q, x_hat


def esms2(phi, y, j, kappa):
    """Support and signal from a candidate pool: keep row scores above kappa."""
    j = [int(i) for i in j]
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    _, zeta, _ = _pool_scores(phi, y, j)
    q = tuple(sorted(j[t] for t in range(len(j)) if zeta[t] > kappa))
    if not q:
        warnings.warn("no pool score exceeds kappa; returning an empty support")
    x_hat, _ = _refit(phi, y, q)
    return q, x_hat


def _tsmp_pool(problem, params):
    m, n = problem.phi.shape
    if m - 1 > n:
        raise ExhaustedCandidatesError(f"pool size m-1={m - 1} exceeds n={n}")
    s_hat = _estimate(problem, params)
    return submp(s_hat, problem.phi, (), m - 1, params)


def tsmp1(problem, k, params=None):
    """Two-stage solver with known sparsity: m-1 pool, then top-k pruning."""
    if params is None:
        params = PursuitParams()
    m = problem.phi.shape[0]
    if k < 1 or k > m - 1:
        raise ValueError(f"k={k} must lie in [1, m-1]")
    t0 = time.perf_counter()
    pool = _tsmp_pool(problem, params)
    _, zeta, deficient = _pool_scores(problem.phi, problem.y, pool)
    omega_hat = tuple(_top_k(pool, zeta, k))
    x_hat, refit_deficient = _refit(problem.phi, problem.y, omega_hat)
    ms = (time.perf_counter() - t0) * 1e3
    return RecoveryResult(
        omega_hat=omega_hat,
        x_hat=x_hat,
        omega_c=tuple(pool),
        zeta=zeta,
        runtime_ms=ms,
        rank_deficient=deficient or refit_deficient,
        algo="tsmp1",
    )


def tsmp2(problem, kappa, params=None):
    """Two-stage solver with unknown sparsity: prune the pool by threshold."""
    if params is None:
        params = PursuitParams()
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    t0 = time.perf_counter()
    pool = _tsmp_pool(problem, params)
    _, zeta, deficient = _pool_scores(problem.phi, problem.y, pool)
    omega_hat = tuple(sorted(pool[t] for t in range(len(pool)) if zeta[t] > kappa))
    if not omega_hat:
        warnings.warn("no pool score exceeds kappa; returning an empty support")
    x_hat, refit_deficient = _refit(problem.phi, problem.y, omega_hat)
    ms = (time.perf_counter() - t0) * 1e3
    return RecoveryResult(
        omega_hat=omega_hat,
        x_hat=x_hat,
        omega_c=tuple(pool),
        zeta=zeta,
        runtime_ms=ms,
        rank_deficient=deficient or refit_deficient,
        algo="tsmp2",
    )


def _pivoted_range_basis(b, rel_tol=1e-10, scale=1.0):
    """Rank-revealing orthonormal basis via column-pivoted QR.

    The cutoff is absolute at rel_tol*scale: b is the residual of an
    orthonormal basis, so a uniformly tiny b means the span is exhausted.
    """
    if b.shape[1] == 0 or not np.any(b):
        return np.zeros((b.shape[0], 0), dtype=b.dtype)
    q, r, _ = scipy.linalg.qr(b, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    rank = int(np.sum(diag > rel_tol * scale))
    return q[:, :rank]


def _solve_normal_qr(phi_cols, y):
    """Solve min ||y - phi_cols x|| through the triangular factor of phi_cols.

    Falls back to the pseudoinverse when the factor is numerically singular.
    """
    r = scipy.linalg.qr(phi_cols, mode="economic")[1] if phi_cols.shape[1] else None
    if r is None:
        return np.zeros((0, y.shape[1]), dtype=y.dtype), False
    diag = np.abs(np.diag(r))
    if diag.min() <= 1e-12 * max(diag.max(), 1e-300):
        return np.linalg.pinv(phi_cols) @ y, True
    rhs = phi_cols.conj().T @ y
    w = scipy.linalg.solve_triangular(r.conj().T, rhs, lower=True)
    return scipy.linalg.solve_triangular(r, w, lower=False), False


def tsmp1_qr(problem, k, params=None):
    """QR fast path of the known-sparsity two-stage solver.

    Columns are scaled to unit norm up front (the selection ratio is invariant
    to column scaling), the complement projector is maintained through an
    incrementally grown orthonormal factor, and the pool/refit least-squares
    problems are solved through triangular factors.
    """
    if params is None:
        params = PursuitParams()
    phi = problem.phi
    y = problem.y
    m, n = phi.shape
    if k < 1 or k > m - 1:
        raise ValueError(f"k={k} must lie in [1, m-1]")
    if m - 1 > n:
        raise ExhaustedCandidatesError(f"pool size m-1={m - 1} exceeds n={n}")

    t0 = time.perf_counter()
    u_y = _estimate(problem, params).basis

    col_norms = np.linalg.norm(phi, axis=0)
    safe = np.where(col_norms > 0, col_norms, 1.0)
    phi_bar = phi / safe

    dtype = np.result_type(phi.dtype, u_y.dtype)
    t = phi_bar.astype(dtype, copy=True)
    b = u_y.astype(dtype, copy=True)
    q2 = np.zeros((m, 0), dtype=dtype)
    taken = np.zeros(n, dtype=bool)
    taken[col_norms == 0] = True
    pool = []

    for _ in range(m - 1):
        q1 = _pivoted_range_basis(b)
        denom = np.linalg.norm(t, axis=0)
        admissible = (~taken) & (denom > params.zero_col_tol)
        if not np.any(admissible):
            raise ExhaustedCandidatesError("no admissible columns remain")
        scores = np.full(n, -1.0)
        if q1.shape[1]:
            numer = np.linalg.norm(q1.conj().T @ t, axis=0)
            scores[admissible] = numer[admissible] / denom[admissible]
        else:
            scores[admissible] = 0.0
        a = argmax_lowest(scores, params.tie_tol)
        pool.append(a)
        taken[a] = True

        q_new = t[:, a] / denom[a]
        if q2.shape[1]:
            q_new = q_new - q2 @ (q2.conj().T @ q_new)
            nq = np.linalg.norm(q_new)
            if nq <= params.zero_col_tol:
                continue
            q_new = q_new / nq
        q_new = q_new.reshape(-1, 1)
        t = t - q_new @ (q_new.conj().T @ t)
        b = b - q_new @ (q_new.conj().T @ b)
        q2 = np.hstack([q2, q_new]) if q2.shape[1] else q_new

    x_bar, deficient = _solve_normal_qr(phi[:, pool], y)
    zeta = np.linalg.norm(x_bar, axis=1)
    omega_hat = tuple(_top_k(pool, zeta, k))
    x_hat = np.zeros((n, y.shape[1]), dtype=np.result_type(phi.dtype, y.dtype))
    sol, refit_deficient = _solve_normal_qr(phi[:, list(omega_hat)], y)
    x_hat[list(omega_hat), :] = sol
    ms = (time.perf_counter() - t0) * 1e3
    return RecoveryResult(
        omega_hat=omega_hat,
        x_hat=x_hat,
        omega_c=tuple(pool),
        zeta=zeta,
        runtime_ms=ms,
        rank_deficient=deficient or refit_deficient,
        algo="tsmp1_qr",
    )


def kappa_largest_gap(zeta):
    """Threshold heuristic: split the scores at their largest descending gap."""
    zeta = np.sort(np.asarray(zeta, dtype=float))[::-1]
    if len(zeta) < 2:
        raise ValueError("need at least two scores to locate a gap")
    gaps = zeta[:-1] - zeta[1:]
    i = int(np.argmax(gaps))
    return float((zeta[i] + zeta[i + 1]) / 2.0)


def kappa_noise_level(phi_pool, sigma_w, l):
    """Threshold heuristic: expected row norm of the pool fit of pure noise.

    For white noise with per-entry standard deviation sigma_w, row i of the
    pool least-squares image has expected norm sigma_w * ||row i of the
    pseudoinverse|| * E||g||_2 with g a standard l-variate Gaussian; the
    heuristic averages this over rows.
    """
    pinv = np.linalg.pinv(np.asarray(phi_pool))
    row_norms = np.linalg.norm(pinv, axis=1)
    chi_mean = math.sqrt(2.0) * math.gamma((l + 1) / 2.0) / math.gamma(l / 2.0)
    return float(sigma_w * chi_mean * row_norms.mean())
