"""Curvature of the variance metric for two-symbol Markov chains.

Normalized memory-2 potentials on two symbols are the stay probabilities
``(x, y)``.  The metric is diagonal there and its Gaussian curvature,
computed by finite differences, equals ``1/(2 - x - y)``.  Dividing the
metric by the entropy changes the picture: the curvature takes both signs.
"""

import numpy as np

from thermoform.geometry2 import curvature2, curvature2_closed, entropy2, grid_scan, metric2

for x, y in [(0.2, 0.3), (0.5, 0.5), (0.8, 0.7)]:
    g = metric2(x, y)
    print(f"(x, y) = ({x}, {y}): E = {g.E:.4f}, G = {g.G:.4f}, h = {entropy2(x, y):.4f}, "
          f"K = {curvature2(x, y):.8f} vs {curvature2_closed(x, y):.8f}")

rows = grid_scan((0.01, 0.99, 0.01, 0.99), 0.02, "Ktilde")
K = np.array([v for _, _, v in rows])
print(f"\nrescaled curvature on a 50x50 grid: {np.sum(K > 0)} positive, {np.sum(K < 0)} negative")
pos = [(round(x, 2), round(y, 2)) for x, y, v in rows if v > 0]
print("positive values sit near", pos[:3], "...")
