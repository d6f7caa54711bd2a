"""Signal-subspace estimation, projections, and the subspace noise measure.

The noise measure is the projector-norm distance from an estimated subspace
to its best-aligned subspace of the same dimension inside the true signal
space; it is zero exactly when the estimate is contained in the signal space.
"""

from dataclasses import dataclass

import numpy as np

from .matmodel import check_matrix

ORTH_TOL = 1e-10


@dataclass(frozen=True)
class RankPolicy:
    """How to pick the subspace dimension: a fixed rank or a singular-value cut.

    auto mode keeps singular values above rel_tol times the largest one.
    """

    mode: str
    r: int | None = None
    rel_tol: float = 1e-8

    def __post_init__(self):
        if self.mode not in ("fixed", "auto"):
            raise ValueError(f"unknown rank policy mode {self.mode!r}")
        if self.mode == "fixed":
            if self.r is None or self.r < 1:
                raise ValueError("fixed rank policy needs r >= 1")
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError("rel_tol must lie in (0, 1)")

    @classmethod
    def fixed(cls, r):
        return cls(mode="fixed", r=int(r))

    @classmethod
    def auto(cls, rel_tol=1e-8):
        return cls(mode="auto", rel_tol=float(rel_tol))


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal-column basis of an estimated subspace."""

    basis: np.ndarray

    def __post_init__(self):
        b = check_matrix(self.basis, "basis")
        gram = b.conj().T @ b
        if np.abs(gram - np.eye(b.shape[1])).max() > ORTH_TOL:
            raise ValueError("basis columns are not orthonormal")
        if b.shape[1] > b.shape[0]:
            raise ValueError("basis has more columns than rows")

    @property
    def dim(self):
        return self.basis.shape[1]


def orthonormal_basis(a, rel_tol=ORTH_TOL, scale=None):
    """Orthonormal basis of the column space of ``a`` (SVD, relative cutoff).

    Returns an m-by-rank array; rank can be zero, in which case the result
    has zero columns. The cutoff is rel_tol times the largest singular value,
    or rel_tol times ``scale`` when given; pass scale=1.0 for residuals of an
    orthonormal basis, where an all-tiny matrix must count as rank zero.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[1] == 0 or not np.any(a):
        m = a.shape[0] if a.ndim == 2 else len(a)
        return np.zeros((m, 0), dtype=a.dtype if a.size else float)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    cutoff = rel_tol * (s[0] if scale is None else scale)
    rank = int(np.sum(s > cutoff))
    return u[:, :rank]


def estimate_signal_subspace(y, policy=None):
    """Top left singular vectors of y, with dimension chosen by the policy."""
    y = check_matrix(y, "y")
    if not np.any(y):
        raise ValueError("cannot estimate a subspace from an all-zero matrix")
    if policy is None:
        policy = RankPolicy.auto()
    u, s, _ = np.linalg.svd(y, full_matrices=False)
    num_rank = int(np.sum(s > policy.rel_tol * s[0]))
    if policy.mode == "fixed":
        if policy.r > num_rank:
            raise ValueError(
                f"requested subspace dimension {policy.r} exceeds rank(y)={num_rank}"
            )
        d = policy.r
    else:
        d = num_rank
    return SubspaceBasis(u[:, :d])


def proj_complement_apply(basis_of, v):
    """Apply the projector onto the orthogonal complement of R(basis_of) to v."""
    v = np.asarray(v)
    q = orthonormal_basis(np.asarray(basis_of))
    if q.shape[1] == 0:
        return v.copy()
    return v - q @ (q.conj().T @ v)


def compute_rho(s_hat, signal_space):
    """Distance from s_hat to its best dim-matched subspace of the signal space.

    Equals sin of the largest principal angle once the signal space is allowed
    to rotate its best-fitting sub-subspace toward s_hat: with orthonormal
    bases U and V, the value is sqrt(1 - sigma_min(V* U)^2). Always in [0, 1].
    """
    u = s_hat.basis if isinstance(s_hat, SubspaceBasis) else SubspaceBasis(s_hat).basis
    v = (
        signal_space.basis
        if isinstance(signal_space, SubspaceBasis)
        else SubspaceBasis(signal_space).basis
    )
    if u.shape[1] > v.shape[1]:
        raise ValueError(
            f"estimated dimension {u.shape[1]} exceeds signal-space dimension {v.shape[1]}"
        )
    if u.shape[0] != v.shape[0]:
        raise ValueError("bases live in different ambient spaces")
    sigmas = np.linalg.svd(v.conj().T @ u, compute_uv=False)
    smallest = sigmas[u.shape[1] - 1] if len(sigmas) else 1.0
    val = 1.0 - min(1.0, float(smallest)) ** 2
    return float(np.sqrt(max(0.0, val)))
