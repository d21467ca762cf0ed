"""Maximal entropy under linear constraints.

First a Bernoulli example: asking for mu(0*) = 0.9 with no base potential
gives the i.i.d. measure with those weights.  Then a two-step constraint
mu(10*) = 2 mu(11*), whose maximizer is a Markov chain whose transition out
of symbol 0 solves (1 - a)^5 = (4/27) a^2.
"""

import numpy as np

from thermoform import FnTable, constrained_equilibrium, entropy, entropy_surface, prescribe
from thermoform.equilibria import combine
from thermoform.gibbs import gibbs_measure

zero = FnTable.constant(2, 0.0)
ind0 = FnTable.indicator(2, [0])

a = prescribe(zero, [ind0], [0.9])
mu = gibbs_measure(combine(zero, [ind0], a))
print(f"coefficient a = {a[0]:.12f} (log 9 = {np.log(9):.12f})")
print("kernel:\n", mu.trans)
print(f"entropy {entropy(mu):.6f}")

phi = FnTable(2, 2, [0.0, 0.0, 1.0, -2.0])
eq = constrained_equilibrium(zero, [phi])
P = eq.measure.trans
p01 = P[1, 0]
print(f"\nP(0 -> 1) = {p01:.10f}, P(1 -> 0) = {P[0, 1]:.15f}")
print(f"(1 - a)^5 - (4/27) a^2 = {(1 - p01) ** 5 - 4 / 27 * p01**2:.2e}")
print(f"Lagrange multiplier {eq.a[0]:.6f}, maximal entropy {eq.value:.6f}")

print("\nentropy as a function of the frequency of 0:")
for row in entropy_surface(zero, [ind0], [[w] for w in (0.1, 0.3, 0.5, 0.7, 0.9, 1.1)]):
    status = f"H = {row.H:.6f}" if row.ok else "outside the rotation set"
    print(f"  w = {row.w[0]:.1f}: {status}")
