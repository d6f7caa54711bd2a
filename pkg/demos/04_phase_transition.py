"""Desk-scale success-rate sweep in the rank-defective regime.

Runs a phase-transition experiment in the rank-defective regime at a
reduced trial count and writes the CSV consumed by figkit, e.g.:

    figkit render --kind success_vs_k --csv demo_sweep.csv --out fig.svg
"""

import math

from jspursuit import ExperimentConfig, sweep, write_csv

config = ExperimentConfig(
    m=64, n=512, l=3, r=3,
    k_grid=(10, 15, 20, 25, 30, 35, 40),
    snr_db=math.inf,
    trials=50,
    seed=1,
    algos=("tsmp1", "osmp", "sa_music_osmp", "somp"),
)

rows = sweep(config)
write_csv(rows, "demo_sweep.csv", verbose=True)

print(f"{'algo':14s}" + "".join(f"k={k:<5d}" for k in config.k_grid))
for algo in config.algos:
    rates = [r.success_rate for r in rows if r.algo == algo]
    print(f"{algo:14s}" + "".join(f"{rate:<7.2f}" for rate in rates))
print("\nwrote demo_sweep.csv")
