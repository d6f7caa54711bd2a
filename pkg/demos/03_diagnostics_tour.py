"""Recoverability diagnostics on a small sensing matrix.

Everything here is exact brute force, so sizes are kept small on purpose.
"""

import numpy as np

from jspursuit import (
    BoundInputs,
    Seed,
    gen_gaussian_phi,
    krank,
    lcp,
    mutual_coherence,
    osmp_theorem4_check,
    row_nondegenerate,
    sample_bounds,
    theorem3_quantities,
    uniqueness_oracles,
    wrip_constant,
)

phi = gen_gaussian_phi(8, 14, 1.0, "real", Seed(5))
omega = (1, 6, 11)

print("krank:", krank(phi))
print("mutual coherence:", round(mutual_coherence(phi), 4))
print("projected local coherence on {0..5} after removing column 1:",
      round(lcp(phi, range(6), (1,)), 4))

w = wrip_constant(phi, omega, 1)
print(f"weak RIP constant of the support + 1 extra: delta={w.delta:.4f} c={w.c:.4f}")

a1, a2, a3 = theorem3_quantities(phi, omega, 0)
print(f"selection-condition quantities: a1={a1:.4f} a2={a2:.4f} a3={a3:.4f}")

print("uniqueness:", uniqueness_oracles(phi, k=3, rank_x=2))
print("theorem-4 check:", osmp_theorem4_check(phi, omega, eta=0.02, r=2))

x = np.random.default_rng(0).standard_normal((3, 5))
print("random 3x5 block row-nondegenerate:", row_nondegenerate(x))

bounds = sample_bounds(BoundInputs(k=8, n=512, r=3, eta=0.0, epsilon=0.01, t=12))
print("\nsample-complexity bounds at (k=8, n=512, r=3, eps=0.01, t=12):")
for key, val in bounds.items():
    print(f"  {key:15s} {val}")
