"""First and second derivatives of the pressure and the variance metric.

The variance metric can be computed along several independent routes, all
exposed here so they can be checked against one another:

* the exact series, summed in closed form with the resolvent,
* the derivative of the Gibbs map ``t -> int phi dmu_{A + t zeta}``,
* the Hessian of ``log lambda`` by finite differences,
* the finite-horizon variance of Birkhoff sums,
* a Monte Carlo batch-means estimate along a sampled orbit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gibbs import MarkovMeasure, gibbs_measure, integrate, sample_path, word_masses
from .sft import FnTable
from .transfer import (
    _tail,
    dn_projection,
    log_lambda,
    normalize,
    resolvent_solve,
)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    matrix: np.ndarray
    base: FnTable

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())


def dlog_lambda(A: FnTable, zeta: FnTable) -> float:
    """Derivative of ``log lambda`` at ``A`` in the direction ``zeta``."""
    return integrate(gibbs_measure(A), zeta)


def gibbs_derivative(A: FnTable, zeta: FnTable, phi: FnTable) -> float:
    """``d/dt int phi dmu_{A + t zeta}`` at ``t = 0``, computed exactly as
    ``int (I - L)^{-1}(phi_A) . DN(zeta) dmu_A`` at the normalized potential."""
    N = normalize(A)
    mu = gibbs_measure(N)
    phiA = phi - integrate(mu, phi)
    x = resolvent_solve(N, phiA)
    return integrate(mu, x * dn_projection(N, zeta))


def _centered_parts(N: FnTable, mu: MarkovMeasure, f: FnTable):
    fA = f - integrate(mu, f)
    return fA, _tail(N, fA, check=False)


def variance_metric(A: FnTable, zeta: FnTable, eta: FnTable) -> float:
    """``<zeta, eta>_A``, with the correlation series summed by the resolvent."""
    N = normalize(A)
    mu = gibbs_measure(N)
    zA, zt = _centered_parts(N, mu, zeta)
    eA, et = _centered_parts(N, mu, eta)
    return integrate(mu, zA * eA) + integrate(mu, zt * eA) + integrate(mu, zA * et)


def gram_matrix(A: FnTable, Phi: list[FnTable]) -> GramMatrix:
    if not Phi:
        raise ValueError("need at least one function")
    N = normalize(A)
    mu = gibbs_measure(N)
    parts = [_centered_parts(N, mu, phi) for phi in Phi]
    K = len(Phi)
    G = np.empty((K, K))
    for i in range(K):
        for j in range(i, K):
            fi, ti = parts[i]
            fj, tj = parts[j]
            G[i, j] = G[j, i] = (
                integrate(mu, fi * fj) + integrate(mu, ti * fj) + integrate(mu, fi * tj)
            )
    return GramMatrix(G, A)


def asymptotic_variance(A: FnTable, zeta: FnTable, horizon: int) -> float:
    """``(1/n) int (sum_{i<n} zeta_A o T^i)^2 dmu_A`` for ``n = horizon``.

    Uses the expansion ``n c_0 + 2 sum_{k<n} (n - k) c_k`` with the
    correlations ``c_k = int L^k(zeta_A) zeta_A dmu_A``.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    N = normalize(A)
    mu = gibbs_measure(N)
    zA = zeta - integrate(mu, zeta)
    n = horizon
    k_mem = max(N.memory, zA.memory, 2)
    m = N.m
    w = np.exp(N.lift(k_mem).values).reshape(m, -1)
    z = zA.lift(k_mem).values
    wz = word_masses(mu, k_mem) * z
    total = n * float(wz @ z)
    f = z
    scale = np.max(np.abs(z))
    for k in range(1, n):
        # L f is a function of k_mem - 1 symbols; lift it back by repetition
        f = np.repeat((w * f.reshape(m, -1)).sum(axis=0), m)
        if np.max(np.abs(f)) <= 1e-30 * scale:
            break
        total += 2 * (n - k) * float(wz @ f)
    return total / n


def _check_step(step: float) -> None:
    if step < 1e-6:
        raise ValueError(f"step {step} is too small: cancellation dominates below 1e-6")


def fd_dlog_lambda(A: FnTable, zeta: FnTable, step: float = 1e-5) -> float:
    """Central difference of ``log lambda`` along ``zeta``."""
    return (log_lambda(A + step * zeta) - log_lambda(A - step * zeta)) / (2 * step)


def hessian_fd_log_lambda(
    A: FnTable, zeta: FnTable, eta: FnTable, step: float = 1e-4, richardson: bool = False
) -> float:
    """Mixed central second difference of ``log lambda`` along ``zeta, eta``."""
    _check_step(step)

    def mixed(h):
        f = lambda s, t: log_lambda(A + s * zeta + t * eta)
        return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h)

    if not richardson:
        return mixed(step)
    return (4 * mixed(step) - mixed(2 * step)) / 3


def fd_gibbs_derivative(A: FnTable, zeta: FnTable, phi: FnTable, step: float = 1e-5) -> float:
    """Central difference of ``t -> int phi dmu_{A + t zeta}``."""
    plus = integrate(gibbs_measure(A + step * zeta), phi)
    minus = integrate(gibbs_measure(A - step * zeta), phi)
    return (plus - minus) / (2 * step)


def birkhoff_terms(path: np.ndarray, f: FnTable) -> np.ndarray:
    """``f(T^i x)`` for every window of the sampled path."""
    n = f.memory
    count = path.shape[0] - n + 1
    codes = np.zeros(count, dtype=np.int64)
    for j in range(n):
        codes = codes * f.m + path[j : j + count]
    return f.values[codes]


def monte_carlo_variance(
    A: FnTable, zeta: FnTable, steps: int = 10**6, seed: int = 0, batches: int | None = None
) -> tuple[float, float]:
    """Batch-means estimate of the asymptotic variance and its standard error."""
    mu = gibbs_measure(A)
    path = sample_path(mu, steps, seed)
    terms = birkhoff_terms(path, zeta)
    if batches is None:
        batches = int(np.sqrt(terms.shape[0]))
    size = terms.shape[0] // batches
    means = terms[: size * batches].reshape(batches, size).mean(axis=1)
    var = size * means.var(ddof=1)
    se = var * np.sqrt(2.0 / (batches - 1))
    return float(var), float(se)
