"""Four routes to the variance metric.

The same number appears as a resolvent series, as the Hessian of
``log lambda``, as the derivative of the Gibbs map, and as the variance of
Birkhoff sums, both deterministic (finite horizon) and sampled.
"""

import numpy as np

from thermoform import (
    FnTable,
    asymptotic_variance,
    gibbs_derivative,
    gram_matrix,
    hessian_fd_log_lambda,
    monte_carlo_variance,
    variance_metric,
)
from thermoform.calculus import fd_gibbs_derivative

rng = np.random.default_rng(7)
A, zeta, eta = (FnTable.random(3, 2, rng) for _ in range(3))

exact = variance_metric(A, zeta, eta)
print(f"resolvent series          {exact:.12f}")
print(f"Hessian of log lambda     {hessian_fd_log_lambda(A, zeta, eta):.12f}")
print(f"Gibbs map, exact          {gibbs_derivative(A, zeta, eta):.12f}")
print(f"Gibbs map, finite diff.   {fd_gibbs_derivative(A, zeta, eta):.12f}")

vz = variance_metric(A, zeta, zeta)
print(f"\n<zeta, zeta>              {vz:.8f}")
for n in (10, 100, 1000, 10000):
    print(f"  horizon {n:>5}: {asymptotic_variance(A, zeta, n):.8f}")
est, se = monte_carlo_variance(A, zeta, steps=10**6, seed=3)
print(f"  Monte Carlo (1e6 steps): {est:.5f} +- {se:.5f}")

# coboundaries and constants are invisible to the metric
g = FnTable.random(3, 2, rng)
null = g - g.compose_shift() + 2.5
print(f"\n<null, null>              {variance_metric(A, null, null):.2e}")

G = gram_matrix(A, [zeta, eta])
print("Gram matrix:\n", G.matrix, "\nsmallest eigenvalue", G.min_eigenvalue)
