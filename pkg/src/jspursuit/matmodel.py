"""Problem types, deterministic random generators, and noise injection.

Everything here is a pure function of an explicit :class:`Seed`, so repeated
runs are bit-for-bit reproducible on a given platform. Matrices are plain
numpy arrays: real matrices are float64, complex matrices complex128.
"""

import math
from dataclasses import dataclass

import numpy as np

FIELDS = ("real", "complex")

_MASK64 = (1 << 64) - 1


def mix_stream(*parts):
    """Hash integer parts into a single 64-bit stream id (splitmix64 rounds).

    Used to derive independent per-trial streams from tuples like
    (k, trial_index) so that sweeps are order-independent.
    """
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h = (h ^ (int(p) & _MASK64)) & _MASK64
        h = (h * 0xBF58476D1CE4E5B9) & _MASK64
        h ^= h >> 27
        h = (h * 0x94D049BB133111EB) & _MASK64
        h ^= h >> 31
    return h


@dataclass(frozen=True)
class Seed:
    """Reproducible RNG identity: a master seed plus a stream index.

    The same (master, stream) pair always yields the same draws. Streams
    derived via :func:`mix_stream` are independent, so trials can run in any
    order (or in parallel) without changing results.
    """

    master: int
    stream: int = 0

    def rng(self):
        ss = np.random.SeedSequence(
            entropy=self.master & _MASK64, spawn_key=(self.stream & _MASK64,)
        )
        return np.random.default_rng(ss)

    def sub(self, *parts):
        """Child seed for a named role (e.g. phi vs signal vs noise)."""
        return Seed(self.master, mix_stream(self.stream, *parts))


def check_matrix(a, name="matrix"):
    """Validate the dense-matrix contract: 2-D, nonempty, all entries finite."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def matrix_field(a):
    """Field tag of a matrix: 'complex' iff it carries a complex dtype."""
    return "complex" if np.iscomplexobj(a) else "real"


def support(x):
    """Indices of rows of ``x`` that are not identically zero (sorted tuple)."""
    x = np.asarray(x)
    return tuple(int(i) for i in np.flatnonzero(np.any(x != 0, axis=1)))


@dataclass(frozen=True)
class RecoveryProblem:
    """One unit of work for the solvers: measurements plus optional ground truth.

    phi is m-by-n, y is m-by-l. When the true signal x0 is attached, omega must
    equal its row support, and k (if given) must equal the support size.
    """

    phi: np.ndarray
    y: np.ndarray
    x0: np.ndarray | None = None
    omega: tuple[int, ...] | None = None
    k: int | None = None

    def __post_init__(self):
        check_matrix(self.phi, "phi")
        check_matrix(self.y, "y")
        if self.phi.shape[0] != self.y.shape[0]:
            raise ValueError(
                f"phi has {self.phi.shape[0]} rows but y has {self.y.shape[0]}"
            )
        if self.omega is not None:
            object.__setattr__(self, "omega", tuple(sorted(int(i) for i in self.omega)))
        if self.x0 is not None:
            check_matrix(self.x0, "x0")
            if self.x0.shape != (self.phi.shape[1], self.y.shape[1]):
                raise ValueError("x0 must be n-by-l")
            supp = support(self.x0)
            if self.omega is None:
                object.__setattr__(self, "omega", supp)
            elif self.omega != supp:
                raise ValueError("omega does not match the row support of x0")
        if self.k is not None and self.omega is not None and len(self.omega) != self.k:
            raise ValueError(f"|omega|={len(self.omega)} but k={self.k}")

    @property
    def m(self):
        return self.phi.shape[0]

    @property
    def n(self):
        return self.phi.shape[1]

    @property
    def l(self):
        return self.y.shape[1]


@dataclass(frozen=True)
class SignalSpec:
    """Shape parameters of the low-rank row-sparse signal model."""

    n: int
    l: int
    k: int
    r: int

    def __post_init__(self):
        if self.n < 1 or self.l < 1 or self.k < 1 or self.r < 1:
            raise ValueError("all SignalSpec fields must be >= 1")
        if self.k > self.n:
            raise ValueError(f"k={self.k} exceeds n={self.n}")
        if self.r > min(self.k, self.l):
            raise ValueError(f"r={self.r} exceeds min(k, l)={min(self.k, self.l)}")


def _draw(rng, shape, sigma, field):
    """i.i.d. Gaussian entries; for complex, each component has variance sigma^2."""
    if field not in FIELDS:
        raise ValueError(f"unknown field {field!r}")
    if field == "complex":
        return sigma * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return sigma * rng.standard_normal(shape)


def gen_gaussian_phi(m, n, sigma=1.0, field="real", seed=Seed(0)):
    """Sensing matrix with i.i.d. Gaussian entries, N(0, sigma^2) per component."""
    if m < 1 or n < 1:
        raise ValueError(f"invalid dimensions ({m}, {n})")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return _draw(seed.rng(), (m, n), float(sigma), field)


def gen_spherical_phi(m, n, seed=Seed(0)):
    """Columns drawn independently and uniformly from the unit sphere in R^m."""
    if m < 1 or n < 1:
        raise ValueError(f"invalid dimensions ({m}, {n})")
    rng = seed.rng()
    g = rng.standard_normal((m, n))
    norms = np.linalg.norm(g, axis=0)
    while np.any(norms == 0):  # probability zero, but keep the contract airtight
        bad = norms == 0
        g[:, bad] = rng.standard_normal((m, int(bad.sum())))
        norms = np.linalg.norm(g, axis=0)
    return g / norms


def gen_partial_dft(m, n, seed=Seed(0), rows=None):
    """m rows of the n-by-n DFT matrix, scaled by 1/sqrt(m).

    Row indices are sampled uniformly without replacement; pass ``rows`` to fix
    the selection (e.g. ``range(n)`` for the full unitary-up-to-scale matrix).
    """
    if m < 1 or n < 1:
        raise ValueError(f"invalid dimensions ({m}, {n})")
    if m > n:
        raise ValueError(f"m={m} must not exceed n={n} for a partial DFT")
    if rows is None:
        rows = seed.rng().choice(n, size=m, replace=False)
    else:
        rows = np.asarray(list(rows), dtype=int)
        if rows.shape != (m,) or len(set(rows.tolist())) != m:
            raise ValueError("rows must be m distinct indices")
        if np.any(rows < 0) or np.any(rows >= n):
            raise ValueError("row indices out of range")
    cols = np.arange(n)
    phase = -2j * np.pi * np.outer(rows, cols) / n
    return np.exp(phase) / math.sqrt(m)


def gen_signal(spec, seed=Seed(0), field="real"):
    """Row-sparse signal with a planted low-rank structure.

    The support is k indices drawn uniformly at random. On the support the
    signal is V1 @ Lam @ V2*, where V1 (k-by-r), V2 (l-by-r) and Lam (r-by-r)
    each consist of r orthonormal columns obtained from an i.i.d. Gaussian
    draw, so the nonzero block has rank exactly r.

    Returns (x0, omega) with x0 of shape (n, l) and omega a sorted tuple.
    """
    if not isinstance(spec, SignalSpec):
        spec = SignalSpec(*spec)
    rng = seed.rng()
    omega = np.sort(rng.choice(spec.n, size=spec.k, replace=False))

    def _orth_cols(rows, cols):
        g = _draw(rng, (rows, cols), 1.0, field)
        q, _ = np.linalg.qr(g)
        return q[:, :cols]

    v1 = _orth_cols(spec.k, spec.r)
    v2 = _orth_cols(spec.l, spec.r)
    lam = _orth_cols(spec.r, spec.r)
    block = v1 @ lam @ v2.conj().T
    dtype = complex if field == "complex" else float
    x0 = np.zeros((spec.n, spec.l), dtype=dtype)
    x0[omega, :] = block
    return x0, tuple(int(i) for i in omega)


def add_noise(y_clean, snr_db, seed=Seed(0)):
    """Additive white Gaussian noise calibrated to a per-sample SNR in dB.

    The noise variance per entry is set from the realized signal energy:
    ||y_clean||_F^2 / (m*l*sigma_w^2) = 10^(snr_db/10). For complex input each
    component carries half the variance so the per-entry energy matches.
    ``snr_db = inf`` returns the clean signal with a zero noise matrix.
    """
    y_clean = check_matrix(y_clean, "y_clean")
    if math.isinf(snr_db) and snr_db > 0:
        return y_clean.copy(), np.zeros_like(y_clean)
    energy = float(np.linalg.norm(y_clean) ** 2)
    if energy == 0.0:
        raise ValueError("y_clean has zero Frobenius norm; SNR is undefined")
    m, l = y_clean.shape
    sigma_w2 = energy / (m * l * 10.0 ** (snr_db / 10.0))
    rng = seed.rng()
    if np.iscomplexobj(y_clean):
        w = _draw(rng, (m, l), math.sqrt(sigma_w2 / 2.0), "complex")
    else:
        w = _draw(rng, (m, l), math.sqrt(sigma_w2), "real")
    return y_clean + w, w
