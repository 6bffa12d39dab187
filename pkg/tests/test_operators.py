from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polifz import operators as ops
from polifz.polyring import (
    LAMBDA_Q,
    LAMBDA_Q_HAT,
    LAMBDA_XI_LAURENT,
    P_BASIS,
    PHI,
    PSI,
    Polynomial,
    Ring,
    RingError,
    RingName,
    p,
    q,
    xi,
)

Q = lambda i, j, e=1: Polynomial.var(LAMBDA_Q, q(i, j), e)
QH = lambda i, j, e=1: Polynomial.var(LAMBDA_Q_HAT, q(i, j), e)
PHI_Q = Polynomial.var(LAMBDA_Q, PHI)
L = LAMBDA_XI_LAURENT
X = lambda i: Polynomial.var(L, xi(i))
PHI_L = Polynomial.var(L, PHI)


def test_d1_examples():
    assert ops.apply_d1(Q(3, 1)) == Q(1, 1) * 3
    assert not ops.apply_d1(Q(1, 1))
    assert ops.apply_d1(Q(2, 2)) == Q(0, 2)


def test_d2_examples():
    assert ops.apply_d2(Q(3, 1, 2)) == Q(4, 2) * 9
    assert ops.apply_d2(Q(3, 1) * Q(1, 1)) == Q(2, 2) * 3
    assert not ops.apply_d2(Q(3, 1))


def test_dpsi_examples():
    assert ops.apply_dpsi(Q(1, 1, 2)) == PHI_Q * Q(0, 0, 2)
    assert ops.apply_dpsi(Q(3, 1, 2)) == PHI_Q * Q(2, 0, 2) * 9
    assert not ops.apply_dpsi(Q(1, 1) * Q(0, 2))


def test_dpsi_prime_examples():
    assert ops.apply_dpsi_prime(Q(2, 2)) == PHI_Q * Q(0, 0)
    phi_hat = Polynomial.var(LAMBDA_Q_HAT, PHI)
    assert ops.apply_dpsi_prime(QH(3, 1), extended=True) == phi_hat * QH(1, -1) * 3
    assert not ops.apply_dpsi_prime(Q(3, 1))


def test_named_operator_examples():
    f = Q(3, 1, 2)
    assert ops.gluing_plus().apply(f, 3) == Q(0, 2) * 90
    assert ops.gluing_minus().apply(f, 3) == Q(0, 2) * -90
    assert ops.polishchuk().apply(f, 0) == f


@pytest.mark.parametrize("k", [1, 2])
def test_degree_bookkeeping(k):
    # 3k gluings consume all 6k boundaries of q[3,1]^{2k}; the Euler characteristic stays -2k
    out = ops.gluing_plus().apply(Q(3, 1, 2 * k), 3 * k)
    for m in out.terms:
        assert all(v.i == 0 for v, _ in m)
        assert sum(v.j * e for v, e in m) == 2 * k


def test_negative_power_rejected():
    with pytest.raises(ValueError):
        ops.gluing_plus().apply(Q(3, 1), -1)


def test_geometric_D_examples():
    P = lambda i, j, e=1: Polynomial.var(P_BASIS, p(i, j), e)
    psi = Polynomial.var(P_BASIS, PSI)
    assert ops.geometric_D(P(3, 1)) == P(1, 1)
    assert ops.geometric_D(P(3, 1, 2)) == psi * P(2, 0, 2) - P(4, 2) * 6 + P(1, 1) * P(3, 1) * 2
    assert not ops.geometric_D(Polynomial.constant(P_BASIS, 1))


def test_change_of_basis_examples():
    P = lambda i, j: Polynomial.var(P_BASIS, p(i, j))
    assert ops.change_of_basis(Q(3, 1)) == P(3, 1) * 3
    assert ops.change_of_basis(PHI_Q) == Polynomial.var(P_BASIS, PSI) * Fraction(1, 4)
    assert not ops.change_of_basis(Q(0, 2), genus=1)


small_q = st.sampled_from([(3, 1), (2, 0), (1, 1), (2, 2), (4, 2), (0, 2)])


@given(st.lists(st.tuples(small_q, st.integers(1, 2)), min_size=1, max_size=3))
def test_change_of_basis_intertwines(factors):
    f = Polynomial.constant(LAMBDA_Q, 1)
    for (i, j), e in factors:
        f = f * Q(i, j, e)
    lhs = ops.change_of_basis(ops.polishchuk().apply(f))
    rhs = ops.geometric_D(ops.change_of_basis(f))
    assert lhs == rhs


def test_inverse_pullback_examples():
    pb = lambda f: ops.inverse_pullback(f).with_ring(L)
    assert pb(Q(0, 0)) == X(0) + 2
    assert pb(Q(0, 2)) == PHI_L * X(0) * 2 + X(1) + PHI_L * 4
    assert pb(Q(0, 4)) == PHI_L ** 2 * X(0) * 3 + PHI_L * X(1) * 3 + X(2) + PHI_L ** 2 * 8
    with pytest.raises(RingError):
        ops.inverse_pullback(Q(3, 1))


def test_extended_inverse_pullback_examples():
    assert ops.extended_inverse_pullback(QH(0, 2)) == X(1) + PHI_L
    assert ops.extended_inverse_pullback(QH(0, -2)) == X(-1) + PHI_L ** -1
    assert ops.extended_inverse_pullback(QH(0, 0) * QH(0, 2)) == (X(0) + 1) * (X(1) + PHI_L)


def test_poli_vs_surface_minus():
    assert ops.verify_poli_vs_cminus(Q(3, 1, 2))
    assert ops.verify_poli_vs_cminus(Q(2, 0) * Q(3, 1, 2))
    assert ops.verify_poli_vs_cminus(Polynomial.constant(LAMBDA_Q, 1))


def test_pipeline_k1():
    res = ops.main_theorem_pipeline(1)
    nonzero = {g: f for g, f in res.lhs_by_phi.items() if f}
    assert nonzero == {0: X(1) * -90}
    assert res.holds
    assert res.fz_ratio() == 108
