"""Prescribed integrals and constrained equilibrium states.

Given test functions ``Phi = (phi_1, ..., phi_K)`` and a base potential ``B``,
the map ``a -> rv(mu_{B + sum a_k phi_k})`` is a diffeomorphism onto the
interior of the rotation set, with Jacobian the Gram matrix of the variance
metric.  :func:`prescribe` inverts it by damped Newton iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .calculus import gram_matrix
from .errors import ConvergenceError, DependentConstraints, TargetOutsideRotationSet
from .gibbs import MarkovMeasure, gibbs_measure, integrate, pressure
from .sft import FnTable

GRAM_TOL = 1e-9
MAX_COEF = 1e3
MAX_ITER = 200
# largest change of the potential, on any word, allowed in one Newton step
MAX_STEP = 5.0


@dataclass(frozen=True, eq=False)
class ConstraintProblem:
    B: FnTable
    Phi: list[FnTable]
    target: np.ndarray = field(default=None)

    def __post_init__(self):
        ms = {self.B.m} | {phi.m for phi in self.Phi}
        if len(ms) > 1:
            raise ValueError(f"alphabets differ: {sorted(ms)}")
        t = np.zeros(len(self.Phi)) if self.target is None else np.asarray(self.target, float)
        if t.shape != (len(self.Phi),):
            raise ValueError("target must have one entry per constraint")
        object.__setattr__(self, "target", t)

    def to_dict(self) -> dict:
        return {
            "B": self.B.to_dict(),
            "Phi": [phi.to_dict() for phi in self.Phi],
            "target": self.target.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConstraintProblem":
        return cls(
            FnTable.from_dict(d["B"]),
            [FnTable.from_dict(p) for p in d["Phi"]],
            d.get("target"),
        )


def rotation_vector(mu: MarkovMeasure, Phi: list[FnTable]) -> np.ndarray:
    return np.array([integrate(mu, phi) for phi in Phi])


def combine(B: FnTable, Phi: list[FnTable], a) -> FnTable:
    """``B + sum_k a_k phi_k``."""
    A = B
    for ak, phi in zip(a, Phi):
        A = A + float(ak) * phi
    return A


def prescribe(
    B: FnTable,
    Phi: list[FnTable],
    target,
    a0=None,
    tol: float = 1e-13,
    max_iter: int = MAX_ITER,
) -> np.ndarray:
    """Coefficients ``a`` with ``rv(mu_{B + sum a_k phi_k}) = target``.

    Raises
    ------
    DependentConstraints
        If the Gram matrix of ``Phi`` at the starting point is singular.
    TargetOutsideRotationSet
        If the iterates run off to infinity or fail to converge.
    """
    target = np.asarray(target, dtype=float)
    K = len(Phi)
    if K == 0:
        return np.zeros(0)
    a = np.zeros(K) if a0 is None else np.array(a0, dtype=float)

    def residual(a):
        A = combine(B, Phi, a)
        return rotation_vector(gibbs_measure(A), Phi) - target, A

    G0 = gram_matrix(combine(B, Phi, a), Phi)
    if G0.min_eigenvalue <= GRAM_TOL:
        raise DependentConstraints(
            f"Gram matrix is singular (min eigenvalue {G0.min_eigenvalue:.3e})"
        )
    F, A = residual(a)
    err = np.max(np.abs(F))
    for _ in range(max_iter):
        if err <= tol:
            break
        J = gram_matrix(A, Phi).matrix
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            raise TargetOutsideRotationSet("Jacobian became singular") from None
        size = combine(B.lift(A.memory) * 0.0, Phi, step).max_abs()
        t = min(1.0, MAX_STEP / size) if size > 0 else 1.0
        while True:
            a_new = a + t * step
            if np.max(np.abs(a_new)) > MAX_COEF:
                raise TargetOutsideRotationSet(
                    f"coefficients diverged (|a| > {MAX_COEF:g}); target {target} "
                    "is not interior to the rotation set"
                )
            try:
                F_new, A_new = residual(a_new)
                err_new = np.max(np.abs(F_new))
            except ConvergenceError:
                err_new = np.inf
            if err_new < err or t < 1e-10:
                break
            t *= 0.5
        if err_new >= err:
            # no further decrease possible: converged to rounding level
            break
        a, F, A, err = a_new, F_new, A_new, err_new
    else:
        raise TargetOutsideRotationSet(f"no convergence after {max_iter} iterations")
    if err > 1e-10:
        raise TargetOutsideRotationSet(
            f"residual stalled at {err:.3e}; target {target} is not interior "
            "to the rotation set"
        )
    return a


@dataclass(frozen=True, eq=False)
class Equilibrium:
    B0: FnTable
    a: np.ndarray
    measure: MarkovMeasure
    value: float


def constrained_equilibrium(B: FnTable, Phi: list[FnTable], **kwargs) -> Equilibrium:
    """Maximize ``h(mu) + int B dmu`` over invariant ``mu`` with all
    ``int phi_k dmu = 0``.

    The maximizer is ``mu_{B0}`` with ``B0 = B + sum a_k phi_k`` and the
    maximum is ``log lambda_{B0}``.
    """
    a = prescribe(B, Phi, np.zeros(len(Phi)), **kwargs)
    B0 = combine(B, Phi, a)
    return Equilibrium(B0, a, gibbs_measure(B0), pressure(B0))


@dataclass(frozen=True)
class SurfaceRow:
    w: tuple
    H: float
    a: tuple
    ok: bool
    message: str = ""


def entropy_surface(B: FnTable, Phi: list[FnTable], grid) -> list[SurfaceRow]:
    """Maximal entropy-plus-energy at prescribed rotation vectors.

    For each ``w`` the value is ``log lambda_{A(w)} - sum a_k w_k - int B``
    at ``A(w) = B + sum a_k(w) phi_k``; for ``B = 0`` it is the largest
    entropy among invariant measures with rotation vector ``w``.  Grid points
    outside the rotation set are flagged rather than raised.
    """
    rows = []
    a_prev = None
    for w in grid:
        w = np.atleast_1d(np.asarray(w, dtype=float))
        try:
            try:
                a = prescribe(B, Phi, w, a0=a_prev)
            except TargetOutsideRotationSet:
                a = prescribe(B, Phi, w)
        except TargetOutsideRotationSet as exc:
            rows.append(SurfaceRow(tuple(map(float, w)), float("nan"), (), False, str(exc)))
            continue
        a_prev = a
        A = combine(B, Phi, a)
        mu = gibbs_measure(A)
        H = pressure(A) - float(a @ w) - integrate(mu, B)
        rows.append(SurfaceRow(tuple(map(float, w)), float(H), tuple(map(float, a)), True))
    return rows


def newton_jacobian_fd(B: FnTable, Phi: list[FnTable], a, step: float = 1e-6) -> np.ndarray:
    """Finite-difference Jacobian of ``a -> rv(mu_{B + sum a_k phi_k})``."""
    a = np.asarray(a, dtype=float)
    K = len(Phi)
    J = np.empty((K, K))
    for j in range(K):
        e = np.zeros(K)
        e[j] = step
        plus = rotation_vector(gibbs_measure(combine(B, Phi, a + e)), Phi)
        minus = rotation_vector(gibbs_measure(combine(B, Phi, a - e)), Phi)
        J[:, j] = (plus - minus) / (2 * step)
    return J

