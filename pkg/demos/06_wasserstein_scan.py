"""Transport distances between nearby Gibbs measures.

Two-symbol measures become measures on [0, 1] through binary expansion.
Perturbing the potential by ``t zeta`` moves the measure, and the scan
reports W1, W2 and their log-log slopes.  These are finite-level numbers
only; nothing is claimed about the continuum limit.  A direction in the
null space (a coboundary) leaves the measure unchanged.
"""

import numpy as np

from thermoform import FnTable, roughness_scan
from thermoform.wasserstein import roughness_scan_csv

rng = np.random.default_rng(5)
A = FnTable.random(2, 2, rng)
zeta = FnTable.random(2, 2, rng)
ts = [0.1, 0.03, 0.01, 0.003, 0.001]

for top in ("interval", "circle"):
    print(f"{top}, level 12")
    for r in roughness_scan(A, zeta, ts, 12, top):
        print(f"  t = {r.t:<6} W1 = {r.w1:.3e}  W2 = {r.w2:.3e}  slope {r.local_exponent:.3f}")

g = FnTable.random(2, 2, rng)
null = g - g.compose_shift()
rows = roughness_scan(A, null, ts[:2], 12)
print("\nalong a coboundary:", [f"{r.w1:.1e}" for r in rows])
print("\nCSV form:\n" + roughness_scan_csv(roughness_scan(A, zeta, ts[:2], 8)))
