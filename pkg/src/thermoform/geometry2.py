"""The two-symbol model with memory-two potentials.

Normalized memory-two potentials on two symbols are parametrized by the
column-stochastic matrices

    S(x, y) = [[x, 1 - y], [1 - x, y]],    exp(A(ij)) = S[i, j],

where ``x`` and ``y`` are the probabilities of staying at symbol 0 and at
symbol 1 (the symbols written 1 and 2 in the usual presentation of this
model).  In these coordinates the variance metric is diagonal with explicit
components ``E`` and ``G``.  Curvatures are evaluated by central differences
of those components; the closed forms serve as checks.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryPoint
from .sft import FnTable

DELTA = 1e-3
# central-difference steps: inner derivative, outer derivative
INNER_STEP = 1e-5
OUTER_STEP = 1e-4

QUANTITIES = ("entropy", "K", "Ktilde", "E", "G")


@dataclass(frozen=True)
class ChartPoint:
    x: float
    y: float

    def __post_init__(self):
        _check_open(self.x, self.y)


@dataclass(frozen=True)
class MetricDiag:
    E: float
    G: float


@dataclass(frozen=True)
class CurvatureSteps:
    E_y: float
    G_x: float
    sqrtEG: float
    term_y: float
    term_x: float


def _check_open(x, y):
    if not (0 < x < 1 and 0 < y < 1):
        raise BoundaryPoint(f"({x}, {y}) is not in the open unit square")


def _check_clamped(x, y, delta=DELTA):
    if not (delta <= x <= 1 - delta and delta <= y <= 1 - delta):
        raise BoundaryPoint(f"({x}, {y}) is outside [{delta}, {1 - delta}]^2")


def chart_potential(x: float, y: float) -> FnTable:
    _check_open(x, y)
    return FnTable(2, 2, np.log([x, 1 - y, 1 - x, y]))


def tangent_vector(x: float, y: float, psi1: float, psi2: float) -> FnTable:
    """The tangent vector at ``chart_potential(x, y)`` moving the chart by
    ``(psi1, psi2)``."""
    _check_open(x, y)
    return FnTable(2, 2, [psi1 / x, -psi2 / (1 - y), -psi1 / (1 - x), psi2 / y])


def stationary2(x: float, y: float) -> tuple[float, float]:
    s = 2 - x - y
    return (1 - y) / s, (1 - x) / s


def _E(x, y):
    return (1 - y) / (x * (1 - x) * (2 - x - y))


def _G(x, y):
    return (1 - x) / (y * (1 - y) * (2 - x - y))


def metric2(x: float, y: float) -> MetricDiag:
    _check_open(x, y)
    return MetricDiag(_E(x, y), _G(x, y))


def hessian_display(x: float, y: float, z11: float, z22: float) -> float:
    """Second derivative of ``log lambda`` along a tangent vector with
    diagonal components ``z11, z22``."""
    s = 2 - x - y
    return x * (1 - y) / ((1 - x) * s) * z11**2 + (1 - x) * y / ((1 - y) * s) * z22**2


def _entropy(x, y):
    s = 2 - x - y
    hx = x * np.log(x) + (1 - x) * np.log(1 - x)
    hy = (1 - y) * np.log(1 - y) + y * np.log(y)
    return -(1 - y) / s * hx - (1 - x) / s * hy


def entropy2(x: float, y: float) -> float:
    _check_open(x, y)
    return float(_entropy(x, y))


def _dx(f, x, y, h):
    return (f(x + h, y) - f(x - h, y)) / (2 * h)


def _dy(f, x, y, h):
    return (f(x, y + h) - f(x, y - h)) / (2 * h)


def gaussian_curvature(E, G, x, y, inner=INNER_STEP, outer=OUTER_STEP) -> float:
    """Curvature of the diagonal metric ``diag(E, G)`` by nested central
    differences of the component functions."""

    def fy(a, b):
        return _dy(E, a, b, inner) / np.sqrt(E(a, b) * G(a, b))

    def fx(a, b):
        return _dx(G, a, b, inner) / np.sqrt(E(a, b) * G(a, b))

    root = np.sqrt(E(x, y) * G(x, y))
    return float(-(_dy(fy, x, y, outer) + _dx(fx, x, y, outer)) / (2 * root))


def curvature2(x: float, y: float) -> float:
    """Gaussian curvature of the variance metric at ``S(x, y)``."""
    _check_clamped(x, y)
    return gaussian_curvature(_E, _G, x, y)


def curvature2_closed(x: float, y: float) -> float:
    _check_open(x, y)
    return 1.0 / (2 - x - y)


def rescaled_curvature2(x: float, y: float, inner=INNER_STEP, outer=OUTER_STEP) -> float:
    """Curvature of the entropy-rescaled metric ``diag(E/h, G/h)``.

    Evaluated as ``h * (K + (1/2) Laplacian(log h))`` with the Laplacian of
    the unscaled metric.
    """
    _check_clamped(x, y)

    def ay(a, b):
        return np.sqrt(_E(a, b) / _G(a, b)) * _dy(_entropy, a, b, inner) / _entropy(a, b)

    def ax(a, b):
        return np.sqrt(_G(a, b) / _E(a, b)) * _dx(_entropy, a, b, inner) / _entropy(a, b)

    root = np.sqrt(_E(x, y) * _G(x, y))
    correction = (_dy(ay, x, y, outer) + _dx(ax, x, y, outer)) / (2 * root)
    K = gaussian_curvature(_E, _G, x, y, inner, outer)
    return float(_entropy(x, y) * (K + correction))


def intermediate_steps2(x: float, y: float) -> CurvatureSteps:
    """Closed forms of the pieces entering the curvature formula."""
    _check_open(x, y)
    s = 2 - x - y
    r = np.sqrt(x * y)
    return CurvatureSteps(
        E_y=-1 / (x * s**2),
        G_x=-1 / (y * s**2),
        sqrtEG=1 / (r * s),
        term_y=-(2 - x + y) / (2 * r * s**2),
        term_x=-(2 + x - y) / (2 * r * s**2),
    )


def numeric_steps2(x: float, y: float, inner=INNER_STEP, outer=OUTER_STEP) -> CurvatureSteps:
    """The same pieces by central differences of ``E`` and ``G``."""
    _check_clamped(x, y)
    sq = lambda a, b: np.sqrt(_E(a, b) * _G(a, b))
    fy = lambda a, b: _dy(_E, a, b, inner) / sq(a, b)
    fx = lambda a, b: _dx(_G, a, b, inner) / sq(a, b)
    return CurvatureSteps(
        E_y=float(_dy(_E, x, y, inner)),
        G_x=float(_dx(_G, x, y, inner)),
        sqrtEG=float(sq(x, y)),
        term_y=float(_dy(fy, x, y, outer)),
        term_x=float(_dx(fx, x, y, outer)),
    )


_EVALUATORS = {
    "entropy": entropy2,
    "K": curvature2,
    "Ktilde": rescaled_curvature2,
    "E": lambda x, y: metric2(x, y).E,
    "G": lambda x, y: metric2(x, y).G,
}


def grid_points(start: float, stop: float, step: float) -> np.ndarray:
    if stop < start:
        return np.zeros(0)
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def grid_scan(region, step: float, quantity: str) -> list[tuple[float, float, float]]:
    """Evaluate ``quantity`` on the grid ``region = (x0, x1, y0, y1)``.

    Rows are ordered x-major.  An empty region yields no rows.
    """
    if quantity not in _EVALUATORS:
        raise ValueError(f"unknown quantity {quantity!r}; choose from {QUANTITIES}")
    if step <= 0:
        raise ValueError("step must be positive")
    x0, x1, y0, y1 = region
    xs = grid_points(x0, x1, step)
    ys = grid_points(y0, y1, step)
    if xs.size and ys.size:
        _check_clamped(xs[0], ys[0])
        _check_clamped(xs[-1], ys[-1])
    f = _EVALUATORS[quantity]
    return [(float(x), float(y), float(f(x, y))) for x in xs for y in ys]


def grid_scan_csv(rows) -> str:
    out = io.StringIO()
    out.write("x,y,value\n")
    for x, y, v in rows:
        out.write(f"{x:.17g},{y:.17g},{v:.17g}\n")
    return out.getvalue()
