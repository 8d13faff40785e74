"""
Tracing the benefit / deficiency trade-off
==========================================

Each interior weight w1 = i/(n+1) gives two weighted-constraint LPs. Their
answers are merged, compared, and filtered into a nondominated front that
runs from the zero-deficiency plan to the best-benefit plan.
"""
import sys
import time

from irrigopt import hypervolume, representative_scenario, run_front
from irrigopt.formats import export_front

s = representative_scenario()
n = int(sys.argv[1]) if len(sys.argv) > 1 else 500

t0 = time.perf_counter()
fr = run_front(s, n)
print(f"{n} weights, {fr.stats.subproblems_solved} LPs, {len(fr)} front points "
      f"in {time.perf_counter() - t0:.2f}s")
print(f"merged duplicates {fr.stats.duplicates_merged}, discarded {fr.stats.discarded_count}")

pairs = fr.pairs()
print("first points (NB, EFD):", pairs[:3].round(2).tolist())
print("last points  (NB, EFD):", pairs[-3:].round(2).tolist())

# Area dominated by the front, measured from its nadir corner
nadir = (pairs[:, 0].min(), pairs[:, 1].max())
for k in (1, 3, 15, 63, n):
    print(f"n={k:4d}: hypervolume {hypervolume(run_front(s, k).pairs(), nadir):.6e}")

export_front(fr, "front_representative.csv")
print("front written to front_representative.csv")
