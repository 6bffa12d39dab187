from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import rationals
from polifz.polyring import (
    LAMBDA_Q,
    LAMBDA_Q_HAT,
    LAMBDA_XI,
    LAMBDA_XI_HAT,
    LAMBDA_XI_LAURENT,
    P_BASIS,
    PHI,
    Polynomial,
    Ring,
    RingError,
    RingName,
    coefficient_of,
    fzp,
    p,
    parse_polynomial,
    partial_derivative,
    phi_grade,
    poly_arith,
    q,
    substitute,
    xi,
)

Q = lambda i, j: Polynomial.var(LAMBDA_Q, q(i, j))
X = lambda i: Polynomial.var(LAMBDA_XI_LAURENT, xi(i))
PHI_L = Polynomial.var(LAMBDA_XI_LAURENT, PHI)

Q_VARS = [q(i, j) for i in range(4) for j in range(4) if (i - j) % 2 == 0] + [PHI]


def _poly(draw_terms):
    terms = {}
    for coeff, exps in draw_terms:
        from polifz.polyring import monomial

        terms[monomial(exps)] = terms.get(monomial(exps), 0) + coeff
    return Polynomial(LAMBDA_Q, terms)


monomials = st.dictionaries(st.sampled_from(Q_VARS), st.integers(1, 3), max_size=3)
polys = st.lists(st.tuples(rationals, monomials), max_size=6).map(_poly)


def test_arith_examples():
    assert poly_arith(Q(3, 1), Q(3, 1), "mul") == Q(3, 1) ** 2
    phi = Polynomial.var(LAMBDA_Q, PHI)
    assert poly_arith(Q(0, 2) + phi, Q(0, 2) - phi, "mul") == Q(0, 2) ** 2 - phi ** 2
    P31 = Polynomial.var(P_BASIS, p(3, 1))
    assert poly_arith(P31 * 3, P31 * 2, "sub") == P31


def test_ring_mismatch_is_an_error():
    with pytest.raises(RingError):
        poly_arith(Q(3, 1), Polynomial.var(LAMBDA_Q_HAT, q(3, 1)), "add")


def test_admissibility():
    with pytest.raises(RingError):
        Q(2, 1)
    with pytest.raises(RingError):
        Polynomial.var(LAMBDA_Q, q(0, -2))
    Polynomial.var(LAMBDA_Q_HAT, q(0, -2))
    Polynomial.var(LAMBDA_Q_HAT, q(1, -1))
    with pytest.raises(RingError):
        Polynomial.var(LAMBDA_Q_HAT, q(2, -2))
    with pytest.raises(RingError):
        Polynomial.var(LAMBDA_XI, xi(-1))
    Polynomial.var(LAMBDA_XI_HAT, xi(-1))
    with pytest.raises(RingError):
        Polynomial.var(Ring(RingName.FZRing), fzp(2))
    with pytest.raises(RingError):
        Polynomial.var(LAMBDA_Q, PHI, -1)
    Polynomial.var(LAMBDA_XI_LAURENT, PHI, -1)


def test_derivative_examples():
    assert partial_derivative(Q(3, 1) ** 2, q(3, 1)) == Q(3, 1) * 2
    assert partial_derivative(Q(3, 1) * Q(1, 1), q(1, 1)) == Q(3, 1)
    phi = Polynomial.var(LAMBDA_Q, PHI)
    assert partial_derivative(phi ** 3, PHI) == phi ** 2 * 3
    with pytest.raises(RingError):
        partial_derivative(PHI_L ** -1, PHI)


def test_substitute_examples():
    f = Polynomial.var(LAMBDA_XI_LAURENT, q(0, 2)) if False else None
    sq = Polynomial.var(LAMBDA_Q, q(0, 2)) ** 2
    out = substitute(sq, {q(0, 2): X(1) + PHI_L}, LAMBDA_XI_LAURENT)
    assert out == X(1) ** 2 + X(1) * PHI_L * 2 + PHI_L ** 2
    assert substitute(X(0) * PHI_L, {xi(0): 2}) == PHI_L * 2
    neg = Polynomial.var(LAMBDA_Q_HAT, q(0, -2))
    assert substitute(neg, {q(0, -2): X(-1) + PHI_L ** -1}, LAMBDA_XI_LAURENT) == X(-1) + PHI_L ** -1


def test_substitute_residual_inadmissible():
    with pytest.raises(RingError):
        substitute(Q(3, 1), {}, LAMBDA_XI_LAURENT)


def test_coefficient_examples():
    assert coefficient_of(Q(0, 2) * 90, q(0, 2)) == 90
    assert coefficient_of(Q(3, 1) ** 2, q(0, 2)) == 0


def test_phi_grade_examples():
    f = X(1) + X(1) * PHI_L * 2 + PHI_L ** 2
    g = phi_grade(f)
    assert g == {0: X(1), 1: X(1) * 2, 2: Polynomial.constant(LAMBDA_XI_LAURENT, 1)}
    assert phi_grade(PHI_L ** -1 * X(-1)) == {-1: X(-1)}
    assert phi_grade(Polynomial.zero(LAMBDA_XI_LAURENT)) == {}


def test_text_format():
    f = X(1) * -90 + PHI_L ** 2 * X(1) * 3 + PHI_L ** -1 * Fraction(1, 2)
    text = str(f)
    assert text == "1/2*phi^-1 + 3*phi^2*xi[1] - 90*xi[1]"
    assert parse_polynomial(text, LAMBDA_XI_LAURENT) == f


@given(polys)
def test_text_and_json_round_trip(f):
    assert parse_polynomial(str(f), LAMBDA_Q) == f
    assert Polynomial.from_json(f.dumps()) == f
    assert str(parse_polynomial(str(f), LAMBDA_Q)) == str(f)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == Polynomial.zero(LAMBDA_Q)


@given(polys)
def test_identity_substitution(f):
    assert substitute(f, {v: Polynomial.var(LAMBDA_Q, v) for v in f.variables()}) == f


@given(polys, polys, st.sampled_from(Q_VARS))
def test_leibniz(a, b, v):
    assert partial_derivative(a * b, v) == partial_derivative(a, v) * b + a * partial_derivative(b, v)


@given(polys)
def test_phi_grade_reassembles(f):
    total = Polynomial.zero(LAMBDA_Q)
    phi = Polynomial.var(LAMBDA_Q, PHI)
    for d, part in phi_grade(f).items():
        total = total + part * phi ** d
    assert total == f


def test_no_zero_coefficients_stored():
    f = Q(3, 1) - Q(3, 1)
    assert not f.terms
