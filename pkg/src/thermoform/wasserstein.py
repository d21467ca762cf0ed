"""Two-symbol measures pushed to the unit interval or circle, and exact 1-D
optimal transport between them.

Binary expansion conjugates the shift on two symbols with the doubling map,
so the mass of the level-``L`` dyadic interval ``j`` is the mass of the
cylinder spelling ``j`` in binary.  Mass is placed at interval midpoints.

Nothing here asserts a continuum statement about the Gibbs map; the scan is
exploratory.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import LevelMismatch
from .gibbs import MarkovMeasure, gibbs_measure, word_masses
from .sft import FnTable

MAX_LEVEL = 24
SCAN_HEADER = "# exploratory: continuum claims not asserted"


@dataclass(frozen=True, eq=False)
class DyadicMeasure:
    level: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (2**self.level,):
            raise ValueError(f"expected {2**self.level} weights")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be a probability vector")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def atoms(self) -> np.ndarray:
        n = 2**self.level
        return (np.arange(n) + 0.5) / n


def project_dyadic(mu: MarkovMeasure, level: int) -> DyadicMeasure:
    if mu.m != 2:
        raise ValueError("dyadic projection needs a two-symbol measure")
    if level > MAX_LEVEL:
        raise ValueError(f"level {level} exceeds the cap {MAX_LEVEL}")
    if level < mu.order:
        raise ValueError(f"level must be at least the order {mu.order}")
    w = np.clip(word_masses(mu, level), 0.0, None)
    return DyadicMeasure(level, w / w.sum())


def _quantile_cost(x, cp, y, cq, shift=0.0, power=2):
    """``int_0^1 |X(t) - Y(t + shift)|^power dt`` for step quantile functions
    ``X``, ``Y`` extended by ``X(t + 1) = X(t) + 1``."""
    n = x.shape[0]
    frac = shift - np.floor(shift)
    breaks = np.concatenate(([0.0, 1.0], cp, np.mod(np.concatenate(([0.0], cq)) - frac, 1.0)))
    breaks = np.unique(np.clip(breaks, 0.0, 1.0))
    mids = 0.5 * (breaks[:-1] + breaks[1:])
    lengths = np.diff(breaks)
    X = x[np.minimum(np.searchsorted(cp, mids, side="right"), n - 1)]
    s = mids + shift
    k = np.floor(s)
    Y = y[np.minimum(np.searchsorted(cq, s - k, side="right"), n - 1)] + k
    return float(np.sum(lengths * np.abs(X - Y) ** power))


def _cdf(w):
    c = np.cumsum(w)
    # an exact top value avoids a rounding sliver where the quantile wraps
    c[-1] = 1.0
    return c


def _circle_w2_squared(x, p, q):
    cp, cq = _cdf(p), _cdf(q)
    cost = lambda th: _quantile_cost(x, cp, x, cq, th)
    # the cost is convex and piecewise linear in the shift: golden-section
    # down to a tiny bracket, then evaluate at the kinks inside it
    lo, hi = -1.0, 1.0
    g = (np.sqrt(5) - 1) / 2
    a, b = hi - g * (hi - lo), lo + g * (hi - lo)
    fa, fb = cost(a), cost(b)
    while hi - lo > 1e-13:
        if fa <= fb:
            hi, b, fb = b, a, fa
            a = hi - g * (hi - lo)
            fa = cost(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + g * (hi - lo)
            fb = cost(b)
    cp0 = np.concatenate(([0.0], cp))
    cq0 = np.concatenate(([0.0], cq))
    best = min(cost(lo), cost(hi))
    for k in (-2.0, -1.0, 0.0, 1.0):
        # kinks sit at shifts th with cq_j + k - cp_i == th
        left = np.searchsorted(cq0, lo + cp0 - k, side="left")
        right = np.searchsorted(cq0, hi + cp0 - k, side="right")
        for i in np.nonzero(right > left)[0]:
            for j in range(left[i], right[i]):
                best = min(best, cost(cq0[j] + k - cp0[i]))
    return best


def w_distance(p: DyadicMeasure, q: DyadicMeasure, order: int = 2, topology: str = "interval") -> float:
    """Exact order-1 or order-2 Wasserstein distance between dyadic measures."""
    if p.level != q.level:
        raise LevelMismatch(f"levels differ: {p.level} vs {q.level}")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if topology not in ("interval", "circle"):
        raise ValueError("topology must be 'interval' or 'circle'")
    a, b = p.weights, q.weights
    # canonical argument order makes the result exactly symmetric
    if tuple(b) < tuple(a):
        a, b = b, a
    n = a.shape[0]
    x = p.atoms
    if order == 1:
        D = np.cumsum(a - b)
        if topology == "interval":
            return float(np.sum(np.abs(D[:-1])) / n)
        return float(np.sum(np.abs(D - np.median(D))) / n)
    if topology == "interval":
        return float(np.sqrt(_quantile_cost(x, _cdf(a), x, _cdf(b))))
    return float(np.sqrt(_circle_w2_squared(x, a, b)))


@dataclass(frozen=True)
class ScanRow:
    t: float
    w1: float
    w2: float
    local_exponent: float
    level: int
    topology: str


def roughness_scan(A: FnTable, zeta: FnTable, t_grid, level: int, topology: str = "interval") -> list[ScanRow]:
    """Distances between the projections of ``mu_A`` and ``mu_{A + t zeta}``.

    ``local_exponent`` is the log-log slope of ``W_2`` between consecutive
    grid points (NaN on the first row or when a distance vanishes).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0) or np.any(np.diff(t_grid) >= 0):
        raise ValueError("t_grid must be positive and decreasing")
    base = project_dyadic(gibbs_measure(A), level)
    rows = []
    prev = None
    for t in t_grid:
        q = project_dyadic(gibbs_measure(A + float(t) * zeta), level)
        w1 = w_distance(base, q, 1, topology)
        w2 = w_distance(base, q, 2, topology)
        slope = float("nan")
        if prev is not None and w2 > 0 and prev[1] > 0:
            slope = float(np.log(w2 / prev[1]) / np.log(t / prev[0]))
        rows.append(ScanRow(float(t), w1, w2, slope, level, topology))
        prev = (t, w2)
    return rows


def roughness_scan_csv(rows) -> str:
    out = io.StringIO()
    out.write(SCAN_HEADER + "\n")
    out.write("t,w1,w2,local_exponent,level,topology\n")
    for r in rows:
        out.write(
            f"{r.t:.17g},{r.w1:.17g},{r.w2:.17g},{r.local_exponent:.17g},{r.level},{r.topology}\n"
        )
    return out.getvalue()
