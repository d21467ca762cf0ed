import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermoform.errors import NotMeanZero
from thermoform.geometry2 import chart_potential
from thermoform.gibbs import gibbs_measure, integrate
from thermoform.sft import FnTable, add_coboundary
from thermoform.transfer import (
    apply_transfer,
    dn_projection,
    m_operator,
    normalize,
    quotient_decompose,
    resolvent_solve,
    rpf,
    transfer_matrix,
)

from conftest import fair_coin, ind0
from oracles import brute_transfer, perron_dense


def column_sums(A):
    return transfer_matrix(A).matrix.sum(axis=0)


# transfer_matrix


def test_transfer_matrix_examples(rng):
    assert np.array_equal(transfer_matrix(FnTable.constant(2, 0.0, 2)).matrix, np.ones((2, 2)))
    M = transfer_matrix(chart_potential(0.25, 0.5)).matrix
    assert np.allclose(M, [[0.25, 0.5], [0.75, 0.5]], atol=1e-15)
    M = transfer_matrix(FnTable.random(2, 3, rng)).matrix
    assert np.all((M > 0).sum(axis=0) == 2)
    assert np.all((M > 0).sum(axis=1) == 2)


def test_transfer_matrix_support_by_enumeration(rng):
    for m, n in [(2, 3), (3, 3), (2, 4)]:
        A = FnTable.random(m, n, rng)
        M = transfer_matrix(A).matrix
        d = m ** (n - 1)
        expected = np.zeros((d, d), dtype=bool)
        # v -> u is allowed when u without its last symbol... v = first n-1 of s.u
        for u in range(d):
            for s in range(m):
                expected[(s * d + u) // m, u] = True
        assert np.array_equal(M > 0, expected)


def test_memory_one_is_lifted(rng):
    A = FnTable.random(3, 1, rng)
    assert np.allclose(transfer_matrix(A).matrix, transfer_matrix(A.lift(2)).matrix)


def test_matrix_action_matches_preimage_sums(rng):
    for m, n in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        A = FnTable.random(m, n, rng)
        f = FnTable.random(m, n - 1, rng)
        M = transfer_matrix(A).matrix
        assert np.allclose(f.values @ M, brute_transfer(A, f), rtol=1e-13)


# rpf


def test_rpf_examples():
    e = rpf(transfer_matrix(FnTable.constant(2, 0.0, 2)))
    assert abs(e.lam - 2) < 1e-13
    assert np.allclose(e.h / e.h[0], [1, 1]) and np.allclose(e.nu, [0.5, 0.5])
    e = rpf(transfer_matrix(FnTable(2, 2, np.log([2, 1, 1, 1]))))
    assert abs(e.lam - (3 + np.sqrt(5)) / 2) < 1e-12
    e = rpf(transfer_matrix(chart_potential(0.25, 0.5)))
    assert abs(e.lam - 1) < 1e-14
    assert np.allclose(e.h / e.h[0], [1, 1], atol=1e-13)
    assert np.allclose(e.nu, [0.4, 0.6], atol=1e-13)


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)])
def test_rpf_residuals_and_dense_oracle(rng, m, n):
    for _ in range(5):
        L = transfer_matrix(FnTable.random(m, n, rng))
        e = rpf(L)
        M = L.matrix
        assert np.linalg.norm(e.h @ M - e.lam * e.h) <= 1e-10 * e.lam * np.linalg.norm(e.h)
        assert np.linalg.norm(M @ e.nu - e.lam * e.nu) <= 1e-10 * e.lam * np.linalg.norm(e.nu)
        assert np.all(e.h > 0) and np.all(e.nu >= 0)
        assert abs(e.nu.sum() - 1) < 1e-13 and abs(e.h @ e.nu - 1) < 1e-13
        lam, left, right = perron_dense(M)
        assert abs(e.lam - lam) < 1e-11 * lam
        assert np.allclose(e.nu, right, atol=1e-10)
        assert np.allclose(e.h / e.h.sum(), left / left.sum(), atol=1e-10)
        # gap estimate against the dense second eigenvalue
        ev = np.sort(np.abs(np.linalg.eigvals(M)))[::-1]
        assert 0 <= e.gap < 1
        assert abs(e.gap - ev[1] / ev[0]) < 0.05


# normalize


def test_normalize_examples(rng):
    N = normalize(FnTable.constant(2, 0.0))
    assert np.allclose(N.values, np.log(0.5), atol=1e-15)
    S = chart_potential(0.3, 0.8)
    assert normalize(S).allclose(S, 1e-12)


def test_normalize_laws(rng):
    for m, n in [(2, 2), (2, 3), (3, 2), (3, 3), (2, 5)]:
        A = FnTable.random(m, n, rng, scale=2.0)
        N = normalize(A)
        assert np.max(np.abs(column_sums(N) - 1)) < 1e-12
        assert normalize(N).allclose(N, 1e-12)
        g = FnTable.random(m, int(rng.integers(1, n + 1)), rng)
        assert normalize(add_coboundary(A, g, float(rng.normal()))).allclose(N, 1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(1, 3), st.integers(0, 2**31))
def test_normalize_invariance_property(m, n, seed):
    r = np.random.default_rng(seed)
    A = FnTable.random(m, n, r)
    g = FnTable.random(m, int(r.integers(1, 3)), r)
    c = float(r.normal(scale=3))
    assert normalize(add_coboundary(A, g, c)).allclose(normalize(A), 1e-10)


# apply_transfer


def test_apply_transfer_examples(rng):
    N = normalize(FnTable.random(2, 3, rng))
    one = FnTable.constant(2, 1.0)
    assert apply_transfer(N, one).allclose(FnTable.constant(2, 1.0, 2), 1e-12)
    assert apply_transfer(FnTable.constant(2, 0.0), one).allclose(FnTable.constant(2, 2.0), 0)
    assert apply_transfer(fair_coin(), ind0() - 0.5).max_abs() < 1e-15


def test_apply_transfer_memory_and_oracle(rng):
    A = FnTable.random(3, 2, rng)
    f = FnTable.random(3, 4, rng)
    out = apply_transfer(A, f)
    assert out.memory == 3
    assert np.allclose(out.values, brute_transfer(A, f), rtol=1e-13)


def test_left_inverse_law(rng):
    for _ in range(10):
        m = int(rng.integers(2, 4))
        N = normalize(FnTable.random(m, int(rng.integers(1, 4)), rng))
        phi = FnTable.random(m, int(rng.integers(1, 4)), rng)
        out = apply_transfer(N, phi.compose_shift())
        assert out.allclose(phi.lift(out.memory), 1e-12)


# resolvent and friends


def test_resolvent_examples(rng):
    C = fair_coin()
    assert resolvent_solve(C, FnTable.constant(2, 0.0)).max_abs() == 0
    b = ind0() - 0.5
    assert resolvent_solve(C, b).allclose(b.lift(2), 1e-15)


def test_resolvent_residual_on_chart(rng):
    for _ in range(20):
        x, y = rng.uniform(0.05, 0.95, 2)
        N = chart_potential(x, y)
        mu = gibbs_measure(N)
        b = FnTable.random(2, int(rng.integers(1, 4)), rng)
        b = b - integrate(mu, b)
        xs = resolvent_solve(N, b)
        resid = xs - apply_transfer(N, xs) - b
        assert resid.max_abs() < 1e-10
        assert abs(integrate(mu, xs)) < 1e-10


def test_resolvent_matches_neumann_series(rng):
    N = normalize(FnTable.random(3, 3, rng))
    mu = gibbs_measure(N)
    b = FnTable.random(3, 3, rng)
    b = b - integrate(mu, b)
    total, term = b, b
    for _ in range(200):
        term = apply_transfer(N, term)
        total = total + term
    assert resolvent_solve(N, b).allclose(total, 1e-10)


def test_resolvent_rejects_non_centered(rng):
    with pytest.raises(NotMeanZero):
        resolvent_solve(fair_coin(), ind0())


def test_m_operator(rng):
    C = fair_coin()
    assert m_operator(C, FnTable.constant(2, 4.0)).max_abs() < 1e-15
    assert m_operator(C, ind0()).max_abs() < 1e-15
    for m, n in [(2, 2), (3, 3)]:
        N = normalize(FnTable.random(m, n, rng))
        mu = gibbs_measure(N)
        f = FnTable.random(m, n, rng)
        fA = f - integrate(mu, f)
        series, term = FnTable.constant(m, 0.0), fA
        for _ in range(60):
            term = apply_transfer(N, term)
            series = series + term
        Mf = m_operator(N, f)
        assert Mf.allclose(-series, 1e-10)
        assert abs(integrate(mu, Mf)) < 1e-12
        # commutes with L on centered inputs
        lhs = apply_transfer(N, m_operator(N, fA))
        rhs = m_operator(N, apply_transfer(N, fA))
        assert lhs.allclose(rhs, 1e-10)


def test_quotient_decompose(rng):
    C = fair_coin()
    f = ind0() - 0.5
    ell, g, c = quotient_decompose(C, f)
    assert ell.allclose(f.lift(ell.memory), 1e-15) and g.max_abs() < 1e-15 and abs(c) < 1e-15
    for m, n in [(2, 2), (2, 3), (3, 2)]:
        N = normalize(FnTable.random(m, n, rng))
        mu = gibbs_measure(N)
        # round trip from a known coboundary plus constant
        g0 = FnTable.random(m, n - 1, rng)
        g0 = g0 - integrate(mu, g0)
        f = g0 - g0.compose_shift() + 1.25
        ell, g, c = quotient_decompose(N, f)
        assert ell.max_abs() < 1e-10 and g.allclose(g0, 1e-10) and abs(c - 1.25) < 1e-12
        # random f
        f = FnTable.random(m, n, rng)
        ell, g, c = quotient_decompose(N, f)
        assert (ell + g - g.compose_shift() + c).allclose(f, 1e-10)
        assert apply_transfer(N, ell).max_abs() < 1e-10
        assert abs(c - integrate(mu, f)) < 1e-12
        assert abs(integrate(mu, g)) < 1e-12
        assert g.allclose(m_operator(N, f), 1e-12)


def test_dn_projection(rng):
    C = fair_coin()
    z = ind0() * 3.0
    assert dn_projection(C, z).allclose((z - 1.5).lift(2), 1e-14)
    N = normalize(FnTable.random(2, 3, rng))
    g = FnTable.random(2, 2, rng)
    assert dn_projection(N, g - g.compose_shift() + 0.3).max_abs() < 1e-10
    for m, n in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        N = normalize(FnTable.random(m, n, rng))
        z = FnTable.random(m, n, rng)
        r = dn_projection(N, z)
        assert apply_transfer(N, r).max_abs() < 1e-10
        assert dn_projection(N, r).allclose(r, 1e-10)
        ell, _, _ = quotient_decompose(N, r - z)
        assert ell.max_abs() < 1e-10
        t = 1e-5
        fd = (normalize(N + t * z) - normalize(N - t * z)) / (2 * t)
        assert fd.allclose(r, 1e-4)


def test_near_periodic_chain():
    # lambda_2 = -lambda_1 to about 12 digits: plain power iteration cannot
    # converge within the sweep budget
    M = np.array([[4.16e-26, 1.58e-28], [1.0, 6.99e-34]])
    A = FnTable(2, 2, np.log(M.ravel()))
    e = rpf(transfer_matrix(A))
    lam = np.sqrt(M[0, 1] * M[1, 0])
    assert abs(e.lam - lam) < 1e-6 * lam
    assert np.max(np.abs(column_sums(normalize(A)) - 1)) < 1e-13


@pytest.mark.parametrize("seed", range(5))
def test_extreme_potentials_normalize(seed):
    r = np.random.default_rng(seed)
    for _ in range(40):
        m, n = int(r.integers(2, 4)), int(r.integers(1, 5))
        N = normalize(FnTable.random(m, n, r, scale=15.0))
        assert np.max(np.abs(column_sums(N) - 1)) < 1e-12


def test_large_constant_shift(rng):
    A = FnTable.random(2, 3, rng)
    assert normalize(A + 800.0).allclose(normalize(A), 1e-12)
    from thermoform.transfer import log_lambda

    assert abs(log_lambda(A + 800.0) - log_lambda(A) - 800.0) < 1e-10
