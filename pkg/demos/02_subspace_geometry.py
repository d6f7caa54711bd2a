"""Subspace estimation under noise and the alignment measure behind it.

Shows how the estimated signal subspace drifts from the true one as SNR
drops, quantified by the projector-distance measure (sin of the largest
principal angle after optimal alignment).
"""

import numpy as np

from jspursuit import (
    RankPolicy,
    Seed,
    SignalSpec,
    SubspaceBasis,
    add_noise,
    compute_rho,
    estimate_signal_subspace,
    gen_gaussian_phi,
    gen_signal,
    orthonormal_basis,
)

m, n, l, r, k = 32, 128, 4, 3, 10
seed = Seed(7)
phi = gen_gaussian_phi(m, n, 1.0, "real", seed.sub(1))
x0, omega = gen_signal(SignalSpec(n, l, k, r), seed.sub(2))
y_clean = phi @ x0

signal_space = SubspaceBasis(orthonormal_basis(phi[:, list(omega)]))
print(f"signal space dim = {signal_space.dim} (columns of the true support)\n")
print(f"{'SNR dB':>8s} {'est dim':>8s} {'rho':>10s}")
for snr in (np.inf, 60, 40, 20, 10, 5):
    y, _ = add_noise(y_clean, snr, seed.sub(3))
    policy = RankPolicy.auto() if np.isinf(snr) else RankPolicy.fixed(r)
    s_hat = estimate_signal_subspace(y, policy)
    rho = compute_rho(s_hat, signal_space)
    print(f"{snr:>8} {s_hat.dim:>8d} {rho:>10.4f}")

print("\nnoiseless rho is zero: the estimate lies inside the signal space.")
