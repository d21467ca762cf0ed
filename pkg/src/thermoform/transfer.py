"""Transfer operators of finite-memory potentials and the normalization map.

Functions of the first ``n - 1`` symbols are row vectors and the transfer
operator acts by right multiplication, ``L f = f @ M``, with

    M[v, u] = exp(A(s.u))   where v is the first n - 1 symbols of s.u.

For ``n = 2`` this is the matrix ``M[i, j] = exp(A(ij))``.  A potential is
normalized exactly when ``M`` is column-stochastic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NotMeanZero
from .sft import FnTable, check_table_size, common_memory

POWER_TOL = 1e-13
POWER_MAXITER = 100_000
CHARPOLY_CHECK_DIM = 64
# plain sweeps before switching to repeated squaring
SQUARING_AFTER = 500


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Dense matrix of the transfer operator on functions of n-1 symbols."""

    m: int
    n: int
    matrix: np.ndarray
    weights: np.ndarray  # exp(A) on n-words, shape (m**n,)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def left(self, f: np.ndarray) -> np.ndarray:
        """``f @ M`` without forming the product densely."""
        d = self.dim
        pre = np.arange(self.m * d) // self.m
        return (self.weights * f[pre]).reshape(self.m, d).sum(axis=0)

    def right(self, x: np.ndarray) -> np.ndarray:
        """``M @ x`` without forming the product densely."""
        d = self.dim
        suf = np.arange(self.m * d) % d
        return (self.weights * x[suf]).reshape(d, self.m).sum(axis=1)


@dataclass(frozen=True, eq=False)
class RpfData:
    """Leading eigendata: ``h M = lam h``, ``M nu = lam nu``, ``h . nu = 1``."""

    lam: float
    h: np.ndarray
    nu: np.ndarray
    gap: float
    iterations: int


def _as_potential(A: FnTable) -> FnTable:
    return A.lift(max(A.memory, 2))


def transfer_matrix(A: FnTable) -> TransferMatrix:
    """Assemble the transfer matrix of ``A`` (memory 1 is lifted to 2)."""
    A = _as_potential(A)
    m, n = A.m, A.memory
    check_table_size(m, n)
    d = m ** (n - 1)
    w = np.exp(A.values)
    codes = np.arange(m**n)
    M = np.zeros((d, d))
    M[codes // m, codes % d] = w
    return TransferMatrix(m, n, M, w)


def _power_iteration(apply, M, tol, maxiter):
    """Normalized power iteration for ``x -> apply(x)``, where ``apply`` is
    multiplication by the dense matrix ``M``.

    When convergence stalls (subdominant eigenvalues close to the leading one
    in modulus) the iteration switches to repeated squaring of ``M + c I``
    with ``c`` near the leading eigenvalue: the shift keeps the Perron vector
    and makes it strictly dominant even when ``-lambda`` is almost an
    eigenvalue, and squaring makes the effective power grow geometrically.
    Returns the iterate, the number of sweeps and the modulus ratio
    ``|lambda_2 / lambda_1|`` estimated from the unshifted sweeps.
    """
    d = M.shape[0]
    x = np.full(d, 1.0 / d)
    P = None
    power = 1
    deltas = []
    growth = []  # log of the normalizing factors of the unshifted sweeps
    ratio = None
    sweeps = 0
    while True:
        for _ in range(SQUARING_AFTER):
            y = apply(x) if P is None else P @ x
            total = y.sum()
            y = y / total
            # componentwise relative change: log h must be accurate everywhere
            delta = np.max(np.abs(y - x) / y)
            x = y
            sweeps += 1
            if P is None:
                deltas.append(delta)
                growth.append(np.log(total))
            if delta < tol:
                if ratio is None:
                    ratio = _rate(deltas, tol)
                # the iterate is still ~ tol * r / (1 - r) away from the
                # eigenvector; a few more sweeps push it to rounding level
                rp = min(max(ratio if P is None else 0.5 ** power, 1e-3), 0.9999)
                for _ in range(int(np.ceil(6 * np.log(10) / -np.log(rp)))):
                    x = apply(x) if P is None else P @ x
                    x = x / x.sum()
                return x, sweeps, ratio
            if sweeps >= maxiter:
                raise ConvergenceError(f"power iteration did not converge in {maxiter} steps")
        if P is None:
            ratio = _rate(deltas, tol)
            # geometric mean over an even number of sweeps is insensitive to
            # near-periodic oscillation
            c = float(np.exp(np.mean(growth[-100:])))
            P = M + c * np.eye(d)
        P = P @ P
        P = P / np.abs(P).max()
        power *= 2


def _rate(deltas, tol):
    """Geometric-mean contraction of the successive differences, read off the
    part of the history above the rounding floor."""
    usable = [(k, dl) for k, dl in enumerate(deltas) if dl > 1e3 * tol]
    if len(usable) < 2:
        return 0.0
    # the second half of the history is past the transient
    (k0, d0), (k1, d1) = usable[len(usable) // 2 - 1], usable[-1]
    if k1 == k0:
        return 0.0
    return float(min((d1 / d0) ** (1.0 / (k1 - k0)), 1.0))


def _det_sign(M: np.ndarray, x: float) -> float:
    sign, _ = np.linalg.slogdet(M - x * np.eye(M.shape[0]))
    return sign


def _check_perron_root(M: np.ndarray, lam: float) -> float:
    """Locate the largest real root of det(M - xI) next to ``lam`` by bisection."""
    d = M.shape[0]
    top = (-1.0) ** d
    delta = 1e-7 * lam
    lo, hi = lam - delta, lam + delta
    if _det_sign(M, hi) != top or _det_sign(M, lo) != -top:
        raise ConvergenceError(
            f"characteristic polynomial has no dominant root near {lam!r}"
        )
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        s = _det_sign(M, mid)
        if s == 0:
            return mid
        if s == top:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def rpf(L: TransferMatrix, tol: float = POWER_TOL, maxiter: int = POWER_MAXITER) -> RpfData:
    """Perron eigendata of a transfer matrix by power iteration.

    The eigenvalue is the two-sided quotient ``h M nu / h nu``, whose error is
    quadratic in the eigenvector errors.  For small matrices it is also checked
    against the dominant root of the characteristic polynomial.
    """
    d = L.dim
    h, it1, r1 = _power_iteration(L.left, L.matrix.T, tol, maxiter)
    nu, it2, r2 = _power_iteration(L.right, L.matrix, tol, maxiter)
    lam = float(h @ L.right(nu) / (h @ nu))
    if d <= CHARPOLY_CHECK_DIM and d > 1:
        root = _check_perron_root(L.matrix, lam)
        if abs(root - lam) > 1e-8 * lam:
            raise ConvergenceError(
                f"power iteration eigenvalue {lam!r} disagrees with "
                f"characteristic root {root!r}"
            )
    h = h / (h @ nu)
    gap = float(min(max(r1, r2), 1.0 - 1e-16))
    return RpfData(lam, h, nu, gap, max(it1, it2))


def _shift_out(A: FnTable) -> tuple[FnTable, float]:
    # log lam and N are exact under constants; working at max A = 0 keeps
    # exp(A) in range
    c = float(A.values.max())
    return A - c, c


def log_lambda(A: FnTable) -> float:
    A0, c = _shift_out(A)
    return float(np.log(rpf(transfer_matrix(A0)).lam)) + c


def normalize(A: FnTable) -> FnTable:
    """The normalized potential ``A + log h - log h o T - log lam``."""
    A, _ = _shift_out(_as_potential(A))
    L = transfer_matrix(A)
    e = rpf(L)
    m, d = A.m, L.dim
    codes = np.arange(m * d)
    logh = np.log(e.h)
    vals = A.values + logh[codes // m] - logh[codes % d] - np.log(e.lam)
    return FnTable(m, A.memory, vals)


def apply_transfer(A: FnTable, f: FnTable) -> FnTable:
    """``(L_A f)(x) = sum over preimages y of x of exp(A(y)) f(y)``."""
    n = common_memory(A, f, minimum=2)
    m = A.m
    d = m ** (n - 1)
    w = np.exp(A.lift(n).values).reshape(m, d)
    v = f.lift(n).values.reshape(m, d)
    return FnTable(m, n - 1, (w * v).sum(axis=0))


def stationary_vector(M: np.ndarray) -> np.ndarray:
    """Probability vector ``pi`` with ``M pi = pi`` for column-stochastic ``M``."""
    d = M.shape[0]
    S = np.eye(d) - M
    S[-1, :] = 1.0
    rhs = np.zeros(d)
    rhs[-1] = 1.0
    pi = np.linalg.solve(S, rhs)
    return pi


def _check_normalized(L: TransferMatrix, atol: float = 1e-9) -> None:
    sums = L.matrix.sum(axis=0)
    if np.max(np.abs(sums - 1.0)) > atol:
        raise ValueError("potential is not normalized (column sums differ from 1)")


def _mean(L: TransferMatrix, pi: np.ndarray, b: np.ndarray) -> float:
    # mass of the n-word s.u is exp(A(s.u)) pi(u)
    d = L.dim
    return float(np.sum(b * L.weights * pi[np.arange(L.m * d) % d]))


def _tail(A: FnTable, b: FnTable, check: bool = True) -> FnTable:
    """``sum_{k>=1} L^k b`` for normalized ``A`` and mean-zero ``b``.

    Solved exactly as ``(I - M^T + 1 pi^T) y = (L b)^T`` on the space of
    functions of n-1 symbols, which pins the mean of ``y`` to zero.
    """
    n = common_memory(A, b, minimum=2)
    L = transfer_matrix(A.lift(n))
    _check_normalized(L)
    pi = stationary_vector(L.matrix)
    bv = b.lift(n).values
    if check:
        mean = _mean(L, pi, bv)
        if abs(mean) >= 1e-10:
            raise NotMeanZero(f"right-hand side has mean {mean!r} under the Gibbs measure")
    c = apply_transfer(A.lift(n), b.lift(n)).values
    d = L.dim
    K = np.eye(d) - L.matrix.T + np.outer(np.ones(d), pi)
    y = np.linalg.solve(K, c)
    return FnTable(A.m, n - 1, y)


def resolvent_solve(A: FnTable, b: FnTable) -> FnTable:
    """Solve ``(I - L_A) x = b`` with ``x`` of zero mean, for normalized ``A``."""
    return b + _tail(A, b)


def _gibbs_mean(A: FnTable, f: FnTable) -> float:
    n = common_memory(A, f, minimum=2)
    L = transfer_matrix(A.lift(n))
    pi = stationary_vector(L.matrix)
    return _mean(L, pi, f.lift(n).values)


def m_operator(A: FnTable, f: FnTable) -> FnTable:
    """``M_A(f) = -sum_{k>=1} L^k (f - int f dmu_A)`` for normalized ``A``."""
    fA = f - _gibbs_mean(A, f)
    return -_tail(A, fA, check=False)


def quotient_decompose(A: FnTable, f: FnTable) -> tuple[FnTable, FnTable, float]:
    """Split ``f = l + g - g o T + c`` with ``L_A l = 0`` and ``int g = 0``.

    ``A`` must be normalized.  Returns ``(l, g, c)``.
    """
    c = _gibbs_mean(A, f)
    g = -_tail(A, f - c, check=False)
    ell = f - (g - g.compose_shift() + c)
    return ell, g, c


def dn_projection(A: FnTable, zeta: FnTable) -> FnTable:
    """Derivative of the normalization map at normalized ``A`` along ``zeta``:
    the projection of ``zeta`` onto ``ker L_A`` along coboundaries plus
    constants."""
    return quotient_decompose(A, zeta)[0]
