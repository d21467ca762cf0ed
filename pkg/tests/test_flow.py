import numpy as np
import pytest

from thermoform.calculus import variance_metric
from thermoform.flow import flow_representative, flow_state, flow_trace
from thermoform.gibbs import entropy, gibbs_measure, word_masses
from thermoform.sft import FnTable
from thermoform.transfer import log_lambda, normalize, transfer_matrix


def test_flow_state_examples(rng):
    A0, B = FnTable.random(2, 2, rng), FnTable.random(2, 3, rng)
    assert flow_state(A0, B, 0.0).A_t.allclose(normalize(A0).lift(3), 1e-12)
    assert flow_state(A0, B, 50.0).A_t.allclose(normalize(B), 1e-12)
    with pytest.raises(ValueError):
        flow_state(A0, B, -1.0)


def test_flow_state_is_normalized(rng):
    s = flow_state(FnTable.random(3, 2, rng), FnTable.random(3, 2, rng), 0.7)
    assert np.max(np.abs(transfer_matrix(s.A_t).matrix.sum(axis=0) - 1)) < 1e-12


def test_exp_floor():
    phi = FnTable(2, 1, [1.0, -1.0])
    rep = flow_representative(2.0 * phi, phi, 800.0)
    assert rep.allclose(phi, 0.0)


def test_temperature_change(rng):
    phi = FnTable.random(2, 2, rng)
    for t in (0.0, 0.3, 2.0, 10.0):
        rep = flow_representative(2.0 * phi, phi, t)
        assert rep.allclose((1 + np.exp(-t)) * phi, 1e-14)


def test_trace_constant_rows(rng):
    B = FnTable.random(2, 2, rng)
    rows = flow_trace(B, B, np.linspace(0, 5, 11))
    for r in rows:
        assert abs(r.pressure - rows[0].pressure) < 1e-12
        assert abs(r.entropy - rows[0].entropy) < 1e-12
        assert r.metric_norm < 1e-6


def test_trace_monotone_and_limit(rng):
    for _ in range(5):
        A0, B = FnTable.random(2, 2, rng), FnTable.random(2, 2, rng)
        grid = np.round(np.arange(0, 10.0001, 0.1), 10)
        rows = flow_trace(A0, B, grid)
        P = np.array([r.pressure for r in rows])
        PB = log_lambda(B)
        d = np.diff(P)
        assert np.all(d >= -1e-11)
        # strictly increasing until within 1e-10 of the limit
        far = PB - P[:-1] > 1e-10
        assert np.all(d[far] > 0)
        assert np.all(P <= PB + 1e-12)
        late = flow_trace(A0, B, [40.0])[0]
        assert abs(late.entropy - entropy(gibbs_measure(B))) < 1e-8
        assert abs(late.pressure - PB) < 1e-10


def test_trace_norm_column(rng):
    A0, B = FnTable.random(3, 2, rng), FnTable.random(3, 2, rng)
    r = flow_trace(A0, B, [1.3])[0]
    At = flow_state(A0, B, 1.3).A_t
    assert abs(r.metric_norm - np.sqrt(variance_metric(At, B - At, B - At))) < 1e-14


def test_trace_grid_must_increase(rng):
    A0 = FnTable.random(2, 2, rng)
    with pytest.raises(ValueError):
        flow_trace(A0, A0, [1.0, 0.5])


def test_pressure_derivative_is_metric_norm(rng):
    # d/dt P_B(A_t) = ||[B - A_t]||^2 along the gradient flow
    A0, B = FnTable.random(2, 3, rng), FnTable.random(2, 3, rng)
    t, h = 0.8, 1e-4
    p = [r.pressure for r in flow_trace(A0, B, [t - h, t, t + h])]
    norm = flow_trace(A0, B, [t])[0].metric_norm
    assert abs((p[2] - p[0]) / (2 * h) - norm**2) < 1e-6


def test_semigroup(rng):
    A0, B = FnTable.random(2, 2, rng), FnTable.random(2, 3, rng)
    s, t = 0.4, 1.1
    two = flow_state(flow_state(A0, B, s).A_t, B, t).A_t
    one = flow_state(A0, B, s + t).A_t
    L = max(two.memory, one.memory) + 1
    assert np.max(np.abs(word_masses(gibbs_measure(two), L) - word_masses(gibbs_measure(one), L))) < 1e-10


def test_fixed_point(rng):
    B = FnTable.random(3, 2, rng)
    for t in (0.0, 1.0, 7.0):
        assert flow_state(B, B, t).A_t.allclose(normalize(B), 1e-12)
