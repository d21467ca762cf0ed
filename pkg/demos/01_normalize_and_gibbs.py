"""Normalizing a potential and reading off its Gibbs measure.

A memory-2 potential on two symbols is pushed along its class (coboundaries
plus constants) to the normalized representative.  The exponentiated
transfer matrix of that representative is column-stochastic, and it is the
backward kernel of the Gibbs measure.
"""

import numpy as np

from thermoform import (
    FnTable,
    add_coboundary,
    entropy,
    gibbs_measure,
    integrate,
    log_lambda,
    normalize,
    rpf,
    transfer_matrix,
)

rng = np.random.default_rng(1)
A = FnTable.random(2, 2, rng)
print("potential A on words 00, 01, 10, 11:", np.round(A.values, 4))

L = transfer_matrix(A)
eig = rpf(L)
print(f"leading eigenvalue {eig.lam:.12f}, spectral gap {eig.gap:.4f}")
print(f"log lambda        {log_lambda(A):.12f}")

N = normalize(A)
M = transfer_matrix(N).matrix
print("normalized potential:", np.round(N.values, 6))
print("column sums of exp(N(A)):", M.sum(axis=0))

# the class of A does not see coboundaries or constants
g = FnTable.random(2, 3, rng)
shifted = add_coboundary(A, g, 0.7)
print("max |N(A + g - g o T + c) - N(A)| =", (normalize(shifted) - N).max_abs())

mu = gibbs_measure(A)
print("stationary law of the first symbol:", mu.pi)
print(f"entropy h(mu_A)  {entropy(mu):.12f}")
print(f"pressure check   h + int A = {entropy(mu) + integrate(mu, A):.12f}")
