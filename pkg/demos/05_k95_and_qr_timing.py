"""Two quick studies: the k95 curve versus l, and why the QR fast path
keeps its runtime flat as the sparsity argument grows."""

import math
import time

from jspursuit import ExperimentConfig, k95, make_problem, tsmp1_qr, write_k95_csv

# --- k95 versus number of measurement vectors (reduced trials) -----------
config = ExperimentConfig(m=32, n=64, l=1, r=1, k_grid=(1,), snr_db=math.inf,
                          trials=30, seed=4, algos=("tsmp1_qr",))
rows = k95(config, (1, 3, 7, 15))
write_k95_csv(rows, "demo_k95.csv")
print(f"{'l':>4s} {'k95':>5s} {'(m+l-1)/2':>10s}")
for row in rows:
    print(f"{row.l:>4d} {row.k95:>5d} {(config.m + row.l - 1) / 2:>10.1f}")

# --- wall time of the pool stage is independent of k ----------------------
print("\nQR fast path wall time vs k at (m,n)=(64,512):")
cfg = ExperimentConfig(m=64, n=512, l=3, r=3, k_grid=(20,), snr_db=math.inf,
                       trials=1, seed=9, algos=("tsmp1_qr",))
prob, _ = make_problem(cfg, 20, 0)
for k in (20, 30, 40, 50, 63):
    t0 = time.perf_counter()
    for _ in range(5):
        tsmp1_qr(prob, k)
    print(f"  k={k:<3d} {1000 * (time.perf_counter() - t0) / 5:6.1f} ms")
