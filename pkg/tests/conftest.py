"""Shared independent oracles: explicit dense-projector and enumeration
implementations used to cross-check the library's optimized paths."""

import math
from itertools import combinations

import numpy as np
import pytest


def complement_projector(phi_cols):
    """I - A A^+ as an explicit dense matrix (pinv route)."""
    m = phi_cols.shape[0]
    if phi_cols.shape[1] == 0:
        return np.eye(m)
    return np.eye(m) - phi_cols @ np.linalg.pinv(phi_cols)


def range_projector(a, abs_tol=1e-10):
    """Projector onto R(a) with an absolute singular-value cutoff."""
    m = a.shape[0]
    if a.shape[1] == 0:
        return np.zeros((m, m))
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    keep = s > abs_tol
    if not keep.any():
        return np.zeros((m, m))
    uk = u[:, keep]
    return uk @ uk.conj().T


def submp_oracle(s_basis, phi, gamma0, steps, zero_col_tol=1e-12, tie_tol=1e-9):
    """Step-by-step greedy selection with fresh dense projectors each step."""
    m, n = phi.shape
    col_norms = np.linalg.norm(phi, axis=0)
    sel = list(gamma0)
    out = []
    for _ in range(steps):
        pperp = complement_projector(phi[:, sel])
        proj_s = range_projector(pperp @ s_basis)
        scores = np.full(n, -1.0)
        for i in range(n):
            if i in sel:
                continue
            resid = pperp @ phi[:, i]
            d = np.linalg.norm(resid)
            if d <= zero_col_tol * col_norms[i]:
                continue
            scores[i] = np.linalg.norm(proj_s @ resid) / d
        best = scores.max()
        assert best >= 0.0, "oracle ran out of admissible columns"
        pick = int(np.flatnonzero(scores >= best - tie_tol)[0])
        sel.append(pick)
        out.append(pick)
    return out


def krank_oracle(a):
    """Kruskal rank by subset enumeration with numpy's matrix_rank."""
    a = np.asarray(a)
    m, n = a.shape
    best = 0
    for q in range(1, min(m, n) + 1):
        if all(
            np.linalg.matrix_rank(a[:, list(s)]) == q for s in combinations(range(n), q)
        ):
            best = q
        else:
            break
    return best


def coherence_oracle(a):
    a = np.asarray(a)
    n = a.shape[1]
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            ai = a[:, i] / np.linalg.norm(a[:, i])
            aj = a[:, j] / np.linalg.norm(a[:, j])
            worst = max(worst, abs(np.vdot(ai, aj)))
    return worst


def lcp_oracle(a, delta, gamma, zero_col_tol=1e-12):
    a = np.asarray(a)
    gamma = sorted(set(gamma))
    rem = sorted(set(delta) - set(gamma))
    pperp = complement_projector(a[:, gamma])
    cols = {}
    for i in rem:
        v = pperp @ a[:, i]
        nv = np.linalg.norm(v)
        cols[i] = None if nv <= zero_col_tol * np.linalg.norm(a[:, i]) else v / nv
    worst = 0.0
    for i in rem:
        for j in rem:
            if j <= i:
                continue
            if cols[i] is None or cols[j] is None:
                continue
            worst = max(worst, abs(np.vdot(cols[i], cols[j])))
    return worst


def _eig_extremes(a_k):
    vals = np.linalg.eigvalsh(a_k.conj().T @ a_k)
    return float(vals[0]), float(vals[-1])


def wrip_oracle(a, j, b):
    a = np.asarray(a)
    n = a.shape[1]
    j = sorted(set(j))
    others = [i for i in range(n) if i not in j]
    lo = math.inf
    hi = 0.0
    for extra in combinations(others, b):
        mn, mx = _eig_extremes(a[:, j + list(extra)])
        lo = min(lo, mn)
        hi = max(hi, mx)
    kappa = lo / hi
    return (1.0 - kappa) / (1.0 + kappa)


def rip_oracle(a, k):
    a = np.asarray(a)
    n = a.shape[1]
    lo = math.inf
    hi = 0.0
    for s in combinations(range(n), k):
        mn, mx = _eig_extremes(a[:, list(s)])
        lo = min(lo, mn)
        hi = max(hi, mx)
    kappa = lo / hi
    return (1.0 - kappa) / (1.0 + kappa)


def theorem3_oracle(phi, omega, v1):
    phi = np.asarray(phi)
    n = phi.shape[1]
    omega = sorted(set(omega))
    off = [i for i in range(n) if i not in omega]
    a1 = wrip_oracle(phi, omega, v1 + 1)
    a2 = math.inf
    for pad in combinations(off, v1):
        rest = [i for i in off if i not in pad]
        num = min(_eig_extremes(phi[:, omega + list(pad) + [i]])[0] for i in rest)
        den = max(_eig_extremes(phi[:, omega + list(pad) + [j]])[1] for j in rest)
        a2 = min(a2, num / den)
    a3 = math.inf
    for pad in combinations(off, v1 + 1):
        a3 = min(a3, _eig_extremes(phi[:, omega + list(pad)])[0])
    a3 /= max(np.linalg.norm(phi, axis=0)) ** 2
    return a1, a2, a3


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
