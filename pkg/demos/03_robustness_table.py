"""Threshold x attack BER table on the bundled pair.

Runs the default sweep (thr1 = 0 .. 0.8, thr2 = 0.75, six attacks, plain LSB
at depth 3) and prints BER per cell. Everything, including the CSV, lands in
``demo_out/sweep``.
"""
from collections import defaultdict

from ssimmark import data
from ssimmark.bench import BASELINE, SweepConfig, run_sweep

cfg = SweepConfig(asset=data.path("asset"), watermark=data.path("watermark"), seed=0)
rows = run_sweep(cfg, "demo_out/sweep")

table = defaultdict(dict)
for r in rows:
    table[r.attack][r.column] = r

columns = [repr(t) for t in cfg.thr1_values] + [BASELINE]
print(f"{'attack':15s}" + "".join(f"{c:>14s}" for c in columns))
for attack, cells in table.items():
    print(f"{attack:15s}" + "".join(f"{cells[c].ber:14.4f}" for c in columns))
print()
print("capacity bits  " + "".join(f"{table['jpeg'][c].capacity_bits:14d}" for c in columns))
print("mean SSIM(A,W) " + "".join(f"{table['jpeg'][c].mean_ssim:14.4f}" for c in columns))
