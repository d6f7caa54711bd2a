"""Comparison solvers: subspace classification, its augmented variant, and
simultaneous orthogonal matching pursuit."""

import time

import numpy as np

from .pursuit import PursuitParams, RecoveryResult, _estimate, _refit, submp
from .subspace import orthonormal_basis


def _top_k_scores(scores, candidates, k):
    """k best candidate indices by score, ties to the lowest index."""
    order = sorted(candidates, key=lambda i: (-scores[i], i))
    return order[:k]


def music(problem, k, params=None):
    """Rank the columns by alignment with the estimated signal subspace.

    Exact when the signal block has full row rank and any k+1 columns of the
    sensing matrix are independent; degrades in the rank-defective case.
    """
    if params is None:
        params = PursuitParams()
    n = problem.phi.shape[1]
    if k < 1 or k > n:
        raise ValueError(f"k={k} out of range")
    t0 = time.perf_counter()
    s_hat = _estimate(problem, params)
    col_norms = np.linalg.norm(problem.phi, axis=0)
    scores = np.zeros(n)
    ok = col_norms > 0
    proj = np.linalg.norm(s_hat.basis.conj().T @ problem.phi[:, ok], axis=0)
    scores[ok] = proj / col_norms[ok]
    omega_hat = tuple(sorted(_top_k_scores(scores, range(n), k)))
    x_hat, deficient = _refit(problem.phi, problem.y, omega_hat)
    ms = (time.perf_counter() - t0) * 1e3
    return RecoveryResult(
        omega_hat=omega_hat, x_hat=x_hat, runtime_ms=ms, rank_deficient=deficient, algo="music"
    )


def sa_music_osmp(problem, k, params=None):
    """Partial greedy support, then classification on the augmented subspace.

    First k-r indices come from the greedy kernel; the span of those columns
    is joined with the estimated subspace and the remaining r indices are the
    best-aligned columns against that augmented space. Reduces to plain
    subspace classification when r equals k.
    """
    if params is None:
        params = PursuitParams()
    n = problem.phi.shape[1]
    if k < 1 or k > n:
        raise ValueError(f"k={k} out of range")
    t0 = time.perf_counter()
    s_hat = _estimate(problem, params)
    r = s_hat.dim
    if r > k:
        raise ValueError(f"subspace dimension {r} exceeds k={k}")
    gamma = submp(s_hat, problem.phi, (), k - r, params) if k > r else []
    aug = orthonormal_basis(np.hstack([problem.phi[:, gamma], s_hat.basis])
                            if gamma else s_hat.basis)
    col_norms = np.linalg.norm(problem.phi, axis=0)
    scores = np.zeros(n)
    ok = col_norms > 0
    proj = np.linalg.norm(aug.conj().T @ problem.phi[:, ok], axis=0)
    scores[ok] = proj / col_norms[ok]
    rest = [i for i in range(n) if i not in set(gamma)]
    picks = _top_k_scores(scores, rest, r)
    omega_hat = tuple(sorted(set(gamma) | set(picks)))
    x_hat, deficient = _refit(problem.phi, problem.y, omega_hat)
    ms = (time.perf_counter() - t0) * 1e3
    return RecoveryResult(
        omega_hat=omega_hat,
        x_hat=x_hat,
        runtime_ms=ms,
        rank_deficient=deficient,
        algo="sa_music_osmp",
    )


def somp(problem, k, params=None):
    """Simultaneous OMP: greedy residual correlation with column normalization."""
    if params is None:
        params = PursuitParams()
    phi, y = problem.phi, problem.y
    m, n = phi.shape
    if k < 1 or k > min(m, n):
        raise ValueError(f"k={k} out of range")
    t0 = time.perf_counter()
    col_norms = np.linalg.norm(phi, axis=0)
    ok = col_norms > 0
    resid = y.astype(np.result_type(phi.dtype, y.dtype), copy=True)
    q_sel = np.zeros((m, 0), dtype=resid.dtype)
    gamma = []
    for _ in range(k):
        scores = np.full(n, -1.0)
        corr = np.linalg.norm(phi.conj().T @ resid, axis=1)
        free = ok.copy()
        free[gamma] = False
        scores[free] = corr[free] / col_norms[free]
        pick = int(np.argmax(scores))
        gamma.append(pick)
        q_new = phi[:, pick].astype(resid.dtype)
        if q_sel.shape[1]:
            q_new = q_new - q_sel @ (q_sel.conj().T @ q_new)
        nq = np.linalg.norm(q_new)
        if nq > 0:
            q_new = (q_new / nq).reshape(-1, 1)
            q_sel = np.hstack([q_sel, q_new]) if q_sel.shape[1] else q_new
            resid = resid - q_new @ (q_new.conj().T @ resid)
    omega_hat = tuple(sorted(gamma))
    x_hat, deficient = _refit(phi, y, omega_hat)
    ms = (time.perf_counter() - t0) * 1e3
    return RecoveryResult(
        omega_hat=omega_hat, x_hat=x_hat, runtime_ms=ms, rank_deficient=deficient, algo="somp"
    )
