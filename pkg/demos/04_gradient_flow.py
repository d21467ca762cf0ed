"""The pressure gradient flow and its closed form.

Modulo coboundaries and constants the flow of ``P_B`` is linear, so
``[A_t] = [B] + e^{-t} [A_0 - B]``.  Pressure rises monotonically to
``log lambda_B`` while the metric norm of the gradient decays.
"""

import numpy as np

from thermoform import FnTable, flow_trace, log_lambda, variance_metric
from thermoform.flow import flow_representative

rng = np.random.default_rng(11)
A0 = FnTable.random(2, 3, rng)
B = FnTable.random(2, 2, rng)

print(f"target log lambda_B = {log_lambda(B):.12f}")
print(f"{'t':>5} {'P_B(A_t)':>16} {'entropy':>10} {'|grad|':>10}")
for r in flow_trace(A0, B, [0, 0.5, 1, 2, 4, 8, 16, 32]):
    print(f"{r.t:5.1f} {r.pressure:16.12f} {r.entropy:10.6f} {r.metric_norm:10.2e}")

# starting at a multiple of the target only changes the temperature
phi = FnTable.random(2, 2, rng)
for t in (0.0, 1.0, 3.0):
    rep = flow_representative(2.0 * phi, phi, t)
    ratio = rep.values / phi.values
    print(f"t = {t}: A_t / phi in [{ratio.min():.6f}, {ratio.max():.6f}], 1 + e^-t = {1 + np.exp(-t):.6f}")
print("metric norm of phi at phi:", np.sqrt(variance_metric(phi, phi, phi)))
