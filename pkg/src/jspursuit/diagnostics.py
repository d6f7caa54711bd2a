"""Recoverability measures, sufficient-condition checkers, and sample bounds.

All combinatorial quantities are exact brute-force enumerations guarded by an
explicit subset budget: exceeding the budget raises, it never silently
approximates, because these values double as test oracles.
"""

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.special import gammaln, logsumexp

from .subspace import orthonormal_basis

# covers a full Kruskal-rank scan at n = 24 (2^24 subsets)
DEFAULT_MAX_SUBSETS = 17_000_000
_RANK_TOL = 1e-10
_ZERO_COL_TOL = 1e-12
_CHUNK_SCALARS = 2_000_000


class BudgetExceededError(RuntimeError):
    """Raised when a brute-force enumeration would exceed its subset budget."""


def _as_2d(a):
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError("expected a 2-D array")
    return a


def _charge(used, count, budget):
    used += count
    if used > budget:
        raise BudgetExceededError(
            f"enumeration needs {used} subsets, budget is {budget}"
        )
    return used


def _batched_svals(a, subsets):
    """Singular values of a[:, s] for every index tuple s (batched, chunked).

    Each row holds all |s| ordered singular values; when a subset is wider
    than the row count the trailing ones are exactly zero, so that the last
    column is always the |s|-th singular value.
    """
    idx = np.asarray(subsets, dtype=int)
    if idx.ndim == 1:
        idx = idx.reshape(-1, 1)
    out = []
    chunk = max(1, _CHUNK_SCALARS // max(1, a.shape[0] * idx.shape[1]))
    for lo in range(0, idx.shape[0], chunk):
        block = a[:, idx[lo : lo + chunk]]  # (m, c, q)
        out.append(np.linalg.svd(np.moveaxis(block, 0, 1), compute_uv=False))
    svals = np.concatenate(out, axis=0)
    width = idx.shape[1]
    if svals.shape[1] < width:
        pad = np.zeros((svals.shape[0], width - svals.shape[1]))
        svals = np.hstack([svals, pad])
    return svals


def _chunked(iterable, size):
    block = []
    for item in iterable:
        block.append(item)
        if len(block) >= size:
            yield block
            block = []
    if block:
        yield block


def _sval_extremes_streamed(a, subsets_iter, width, stop_if_min_below=None):
    """(min of smallest, max of largest) squared singular values over subsets.

    Streams the enumeration in bounded-memory chunks; with stop_if_min_below
    set, returns early once any subset's smallest singular value is at or
    under that threshold (the max is then only a partial value).
    """
    chunk = max(1, _CHUNK_SCALARS // max(1, a.shape[0] * width))
    lo = math.inf
    hi = 0.0
    for block in _chunked(subsets_iter, chunk):
        svals = _batched_svals(a, block)
        lo = min(lo, float(np.min(svals[:, -1])))
        hi = max(hi, float(np.max(svals[:, 0])))
        if stop_if_min_below is not None and lo <= stop_if_min_below:
            break
    return lo, hi


def krank(a, rank_tol=None, max_subsets=DEFAULT_MAX_SUBSETS):
    """Largest q such that every q-column submatrix has full column rank.

    Independence is judged by the smallest singular value against
    rank_tol (default 1e-10 times the largest singular value of the full
    matrix). Any zero column gives 0.
    """
    a = _as_2d(a)
    m, n = a.shape
    if np.any(np.linalg.norm(a, axis=0) == 0):
        return 0
    sigma1 = np.linalg.norm(a, ord=2)
    if sigma1 == 0:
        return 0
    tol = (_RANK_TOL * sigma1) if rank_tol is None else rank_tol
    used = 0
    best = 0
    for q in range(1, min(m, n) + 1):
        used = _charge(used, math.comb(n, q), max_subsets)
        lo, _ = _sval_extremes_streamed(
            a, combinations(range(n), q), q, stop_if_min_below=tol
        )
        if lo > tol:
            best = q
        else:
            break
    return best


def lcp(a, delta, gamma):
    """Worst pairwise coherence of projected-and-normalized columns.

    Columns indexed by delta minus gamma are projected onto the orthogonal
    complement of the span of the gamma columns and normalized; columns whose
    projection is negligible follow the zero-vector convention and contribute
    zero to every pair.
    """
    a = _as_2d(a)
    gamma = sorted(set(int(i) for i in gamma))
    rem = sorted(set(int(i) for i in delta) - set(gamma))
    if len(rem) < 2:
        raise ValueError("need at least two indices in delta \\ gamma")
    cols = a[:, rem]
    if gamma:
        q = orthonormal_basis(a[:, gamma])
        if q.shape[1]:
            cols = cols - q @ (q.conj().T @ cols)
    norms = np.linalg.norm(cols, axis=0)
    ref = np.linalg.norm(a[:, rem], axis=0)
    alive = norms > _ZERO_COL_TOL * np.where(ref > 0, ref, 1.0)
    if alive.sum() < 2:
        return 0.0
    unit = cols[:, alive] / norms[alive]
    gram = np.abs(unit.conj().T @ unit)
    np.fill_diagonal(gram, 0.0)
    return float(gram.max())


def mutual_coherence(a):
    """Worst-case coherence: max |<a_i/|a_i|, a_j/|a_j|>| over column pairs."""
    a = _as_2d(a)
    n = a.shape[1]
    if n < 2:
        raise ValueError("need at least two columns")
    if np.any(np.linalg.norm(a, axis=0) == 0):
        raise ValueError("matrix has a zero column")
    return lcp(a, range(n), ())


@dataclass(frozen=True)
class WripConstant:
    delta: float
    c: float


def wrip_constant(a, j, b, max_subsets=DEFAULT_MAX_SUBSETS):
    """Weak restricted-isometry constant of the supersets of a fixed column set.

    Enumerates every K containing j with |K| = |j| + b; the constant is
    (1 - kappa)/(1 + kappa) where kappa is the ratio of the worst smallest
    squared singular value to the worst largest one. Also returns the scaling
    c that attains the constant.
    """
    a = _as_2d(a)
    n = a.shape[1]
    j = sorted(set(int(i) for i in j))
    if b < 0 or len(j) + b > n:
        raise ValueError("invalid superset size")
    others = [i for i in range(n) if i not in j]
    _charge(0, math.comb(len(others), b), max_subsets)
    supersets = (tuple(j) + extra for extra in combinations(others, b))
    lo, hi = _sval_extremes_streamed(a, supersets, len(j) + b)
    lo, hi = lo**2, hi**2
    if hi == 0.0:
        raise ValueError("all candidate submatrices are zero")
    kappa = lo / hi
    delta = (1.0 - kappa) / (1.0 + kappa)
    return WripConstant(delta=delta, c=(lo + hi) / 2.0)


def rip_constant(a, k, max_subsets=DEFAULT_MAX_SUBSETS):
    """Order-k restricted-isometry constant by full enumeration."""
    a = _as_2d(a)
    n = a.shape[1]
    if not (1 <= k <= n):
        raise ValueError("invalid order")
    _charge(0, math.comb(n, k), max_subsets)
    lo, hi = _sval_extremes_streamed(a, combinations(range(n), k), k)
    lo, hi = lo**2, hi**2
    if hi == 0.0:
        raise ValueError("zero matrix")
    kappa = lo / hi
    return (1.0 - kappa) / (1.0 + kappa)


def numerical_rank(a, rank_tol=_RANK_TOL):
    a = _as_2d(a)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def row_nondegenerate(x, max_subsets=DEFAULT_MAX_SUBSETS):
    """True iff every subset of up to rank(x) rows is linearly independent."""
    x = _as_2d(x)
    return krank(x.conj().T, max_subsets=max_subsets) == numerical_rank(x)


def uniqueness_oracles(phi, k, rank_x, max_subsets=DEFAULT_MAX_SUBSETS):
    """Worst-case and almost-all uniqueness conditions on the sensing matrix.

    l0_ok: any q columns independent for q > 2k - rank_x (worst-case bound);
    k1_ok: any k+1 columns independent (suffices for almost all signals).
    """
    kr = krank(phi, max_subsets=max_subsets)
    return {"l0_ok": kr > 2 * k - rank_x, "k1_ok": kr >= k + 1, "krank": kr}


def projected_normalized_columns(phi, gamma):
    """Columns projected onto the complement of the gamma span, normalized.

    Columns whose projection is negligible become exactly zero (the
    zero-vector convention).
    """
    phi = _as_2d(phi)
    gamma = sorted(set(int(i) for i in gamma))
    cols = phi.astype(np.result_type(phi.dtype, float), copy=True)
    if gamma:
        q = orthonormal_basis(phi[:, gamma])
        if q.shape[1]:
            cols = cols - q @ (q.conj().T @ cols)
    norms = np.linalg.norm(cols, axis=0)
    ref = np.linalg.norm(phi, axis=0)
    alive = norms > _ZERO_COL_TOL * np.where(ref > 0, ref, 1.0)
    out = np.zeros_like(cols)
    out[:, alive] = cols[:, alive] / norms[alive]
    return out


def theorem3_quantities(phi, omega, v1, max_subsets=DEFAULT_MAX_SUBSETS):
    """The three exhaustive selection-condition quantities (a1, a2, a3).

    a1 is the weak RIP constant of the true-support columns with v1+1 extras;
    a2 the worst ratio of extreme squared singular values over all v1-sized
    off-support pads plus one extra column; a3 the worst smallest squared
    singular value over (v1+1)-sized pads, normalized by the largest column
    energy.
    """
    phi = _as_2d(phi)
    n = phi.shape[1]
    omega = sorted(set(int(i) for i in omega))
    k = len(omega)
    off = [i for i in range(n) if i not in omega]
    if v1 < 0 or v1 + 1 > len(off):
        raise ValueError("v1 out of range")

    a1 = wrip_constant(phi, omega, v1 + 1, max_subsets=max_subsets).delta

    used = _charge(0, math.comb(len(off), v1), max_subsets)
    a2 = math.inf
    for pad in combinations(off, v1):
        rest = [i for i in off if i not in pad]
        used = _charge(used, len(rest), max_subsets)
        subsets = [tuple(omega) + pad + (i,) for i in rest]
        svals = _batched_svals(phi, subsets)
        num = float(np.min(svals[:, -1]) ** 2)
        den = float(np.max(svals[:, 0]) ** 2)
        a2 = min(a2, num / den)

    used = _charge(used, math.comb(len(off), v1 + 1), max_subsets)
    padded = (tuple(omega) + pad for pad in combinations(off, v1 + 1))
    lo, _ = _sval_extremes_streamed(phi, padded, k + v1 + 1)
    max_col = float(np.max(np.linalg.norm(phi, axis=0)) ** 2)
    a3 = lo**2 / max_col
    return float(a1), float(a2), float(a3)


def osmp_theorem4_check(phi, omega, eta, r, max_subsets=DEFAULT_MAX_SUBSETS):
    """Exhaustive sufficient-condition check for full support recovery.

    Evaluates the two-part condition: an angle margin over all partial
    selections smaller than k-r (via alpha and beta), and a conditioning
    floor at exactly k-r selected true indices. Families that are empty
    (k == r) leave alpha/beta at their vacuous value 1.
    """
    phi = _as_2d(phi)
    n = phi.shape[1]
    omega = sorted(set(int(i) for i in omega))
    k = len(omega)
    if not (0.0 <= eta <= 0.5):
        raise ValueError("eta must lie in [0, 0.5]")
    if not (1 <= r <= k):
        raise ValueError("r must lie in [1, k]")
    off = [i for i in range(n) if i not in omega]

    alpha = 1.0
    beta = 1.0
    used = 0
    for q in range(0, max(0, k - r)):
        used = _charge(used, math.comb(k, q) * (1 + len(off)), max_subsets)
        for gamma in combinations(omega, q):
            dotted = projected_normalized_columns(phi, gamma)
            keep = [i for i in omega if i not in gamma]
            svals = np.linalg.svd(dotted[:, keep], compute_uv=False)
            alpha = min(alpha, float(svals[-1]))
            for i in off:
                svals = np.linalg.svd(dotted[:, keep + [i]], compute_uv=False)
                beta = min(beta, float(svals[-1]))
    margin = math.sqrt(r / k) * alpha - math.sqrt(max(0.0, 1.0 - min(beta, 1.0) ** 2)) - 2.0 * eta
    cond36 = margin > 0.0

    floor = math.inf
    used = _charge(used, math.comb(k, k - r) * (1 + len(off)), max_subsets)
    for gamma in combinations(omega, k - r):
        dotted = projected_normalized_columns(phi, gamma)
        keep = [i for i in omega if i not in gamma]
        for i in off:
            svals = np.linalg.svd(dotted[:, keep + [i]], compute_uv=False)
            floor = min(floor, float(svals[-1]) ** 2)
    cond37 = floor > 4.0 * eta * (1.0 - eta)
    return {"cond36": cond36, "cond37": cond37, "alpha": alpha, "beta": beta}


@dataclass(frozen=True)
class ThresholdCheck:
    eq44: bool
    eq45: bool | None
    min_row_norm: float
    noise_level: float


def tsmp_theorem7_check(phi, omega, omega_c, x0, w, kappa=None):
    """Literal evaluation of the two-stage pruning success conditions.

    The noise level is the largest row norm of the perturbation divided by
    the smallest singular value of the candidate-pool columns; eq44 compares
    it against the smallest true row norm, eq45 checks the kappa window.
    """
    phi = _as_2d(phi)
    omega = sorted(set(int(i) for i in omega))
    omega_c = sorted(set(int(i) for i in omega_c))
    if not set(omega) <= set(omega_c):
        raise ValueError("omega is not contained in omega_c")
    x0 = _as_2d(x0)
    min_row = float(np.min(np.linalg.norm(x0[omega, :], axis=1)))
    smin = float(np.linalg.svd(phi[:, omega_c], compute_uv=False)[-1])
    if w is None or not np.any(w):
        noise_level = 0.0
    else:
        w = _as_2d(w)
        noise_level = float(np.max(np.linalg.norm(w, axis=1))) / smin
    eq44 = min_row > 2.0 * noise_level
    eq45 = None
    if kappa is not None:
        eq45 = noise_level < kappa <= min_row - noise_level
    return ThresholdCheck(eq44=eq44, eq45=eq45, min_row_norm=min_row, noise_level=noise_level)


def gram_gershgorin_radius(a):
    """Largest off-diagonal absolute row sum of the Gram matrix.

    For l2-normalized columns, every squared singular value lies within this
    radius of 1.
    """
    a = _as_2d(a)
    gram = np.abs(a.conj().T @ a)
    np.fill_diagonal(gram, 0.0)
    return float(gram.sum(axis=1).max())


def eval_bound_functions(eta, k, r):
    """Closed-form margin functions used by the sample-complexity bounds."""
    if not (0.0 <= eta <= 0.5):
        raise ValueError("eta must lie in [0, 0.5]")
    if k < 1 or r < 1:
        raise ValueError("k and r must be >= 1")
    k = float(k)
    r = float(r)
    f1 = ((k / (k + r)) * (2.0 * eta * math.sqrt(r / k)
                           + math.sqrt((k + r) / k - 4.0 * eta * eta))) ** 2
    f2 = 1.0 / (math.sqrt((k / r) * eta * eta + 2.0) - math.sqrt(k / r) * eta) ** 2
    return {"f1": f1, "f2": f2, "f": min(f1, f2)}


def coherence_level(x):
    """Strictly increasing threshold map on (0, 1/4) used by the bounds."""
    if not (0.0 < x < 0.25):
        raise ValueError("argument must lie in (0, 1/4)")
    return (x + math.sqrt(x * x + 4.0 * x)) / (1.0 - 2.0 * math.sqrt(x))


def coherence_level_inverse(y, tol=1e-15):
    """Inverse of the threshold map, solved by bisection on (0, 1/4)."""
    if y <= 0.0:
        raise ValueError("target must be positive")
    lo, hi = 0.0, 0.25
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= 0.0 or mid >= 0.25:
            break
        if coherence_level(mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def pool_failure_prob(t, k, epsilon):
    """Tail sum of binomially weighted error powers, computed in log space."""
    if t <= k:
        raise ValueError("t must exceed k")
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    i = np.arange(t - k + 1, t + 1, dtype=float)
    log_terms = gammaln(t + 1) - gammaln(i + 1) - gammaln(t - i + 1) + i * math.log(epsilon)
    return float(np.exp(logsumexp(log_terms)))


@dataclass(frozen=True)
class BoundInputs:
    """Inputs for the sample-complexity bound calculators."""

    k: int
    n: int
    r: int
    eta: float
    epsilon: float
    t: int | None = None
    sigma: float | None = None

    def __post_init__(self):
        if not (1 <= self.r <= self.k <= self.n):
            raise ValueError("need 1 <= r <= k <= n")
        if not (0.0 <= self.eta <= 0.5):
            raise ValueError("eta must lie in [0, 0.5]")
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")
        if self.t is not None and self.t <= self.k:
            raise ValueError("t must exceed k")
        if self.sigma is not None and self.sigma <= 0:
            raise ValueError("sigma must be positive")


def concentration_margin(kappa, sigma, smin_pool, pool_size):
    """Margin controlling the noisy-pruning success probability."""
    return kappa * smin_pool / (2.0 * sigma) - math.sqrt(pool_size) - 1.0


def sample_bounds(inputs, kappa=None, smin_pool=None, pool_size=None):
    """All sample-complexity bound values for one parameter point.

    Returns the one-stage and two-stage measurement bounds, the two-stage
    pool failure probability (when t is given), the Gaussian and partial-DFT
    specializations, and the optional concentration margin when the noisy
    threshold inputs are supplied.
    """
    k, n, r = inputs.k, inputs.n, inputs.r
    eta, eps = inputs.eta, inputs.epsilon
    fs = eval_bound_functions(eta, k, r)
    g = 4.0 * eta * (1.0 - eta)
    z = min((1.0 - fs["f"]) / k, (1.0 - g) / r)
    if z <= 0.0:
        raise ValueError("bound is vacuous for these inputs (margin is nonpositive)")
    rate = max(4.0, 1.0 / coherence_level_inverse(z))
    osmp_m = k + rate * math.log(4.0 * k * k * n / eps)

    tsmp_m = None
    fail = None
    if inputs.t is not None:
        tsmp_m = k + inputs.t + rate * math.log(4.0 * k * n / eps)
        fail = pool_failure_prob(inputs.t, k, eps)

    tau = max(fs["f1"], g)
    theta = (1.0 - tau) / (1.0 + tau)
    gauss_m = 2.0 / (math.sqrt(1.0 + theta) - 1.0) ** 2 * (
        k + 2.0 * math.log(2.0 * (n - k) / eps)
    )
    dft_m = (
        2.0 * (3.0 + theta) * (k + 1.0) / (3.0 * theta * theta)
    ) * math.log(2.0 * (k + 1.0) * (n - k) / eps)

    c_value = None
    if None not in (inputs.sigma, kappa, smin_pool, pool_size):
        c_value = concentration_margin(kappa, inputs.sigma, smin_pool, pool_size)
    return {
        "osmp_m": osmp_m,
        "tsmp_m": tsmp_m,
        "tsmp_fail_prob": fail,
        "gauss_m": gauss_m,
        "dft_m": dft_m,
        "c_value": c_value,
        "z": z,
    }


@dataclass(frozen=True)
class MeasureReport:
    """Bundle of recoverability measures for one sensing matrix."""

    krank: int | None
    coherence: float
    lcp: float | None = None
    wrip: float | None = None
    a1: float | None = None
    a2: float | None = None
    a3: float | None = None
    exhaustive: bool = True

    def to_dict(self):
        return {
            "krank": self.krank,
            "coherence": self.coherence,
            "lcp": self.lcp,
            "wrip": self.wrip,
            "a1": self.a1,
            "a2": self.a2,
            "a3": self.a3,
            "exhaustive": self.exhaustive,
        }
