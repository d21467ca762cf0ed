"""Gradient flow of the pressure functional on potentials modulo coboundaries.

The gradient of ``P_B`` at ``[A]`` is ``[B - A]``, so the flow is linear in
the quotient and solved in closed form: ``[A_t] = e^{-t}[A_0 - B] + [B]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import variance_metric
from .gibbs import entropy, gibbs_measure, integrate
from .sft import FnTable
from .transfer import normalize

EXP_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class FlowState:
    t: float
    A_t: FnTable  # normalized representative


def _decay(t: float) -> float:
    e = float(np.exp(-t))
    return 0.0 if e < EXP_FLOOR else e


def flow_representative(A0: FnTable, B: FnTable, t: float) -> FnTable:
    """The unnormalized representative ``B + e^{-t} (A0 - B)``."""
    if t < 0:
        raise ValueError("flow time must be >= 0")
    return B + _decay(t) * (A0 - B)


def flow_state(A0: FnTable, B: FnTable, t: float) -> FlowState:
    return FlowState(float(t), normalize(flow_representative(A0, B, t)))


@dataclass(frozen=True)
class TraceRow:
    t: float
    pressure: float
    entropy: float
    metric_norm: float


def flow_trace(A0: FnTable, B: FnTable, t_grid) -> list[TraceRow]:
    """``P_B(A_t)``, the entropy of ``mu_{A_t}`` and ``||[B - A_t]||_{A_t}``
    along the flow."""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be increasing")
    rows = []
    for t in t_grid:
        A_t = flow_state(A0, B, t).A_t
        mu = gibbs_measure(A_t)
        h = entropy(mu)
        grad = B - A_t
        norm2 = max(variance_metric(A_t, grad, grad), 0.0)
        rows.append(TraceRow(float(t), h + integrate(mu, B), h, float(np.sqrt(norm2))))
    return rows
