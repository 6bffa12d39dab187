from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from conftest import nonzero_rationals, quads, rationals
from polifz.coeff import (
    QuadExt,
    double_factorial,
    format_rational,
    gen_binomial,
    parse_rational,
    quad_arith,
    rat_arith,
)

R3 = QuadExt.sqrt3()


def test_rat_arith_examples():
    assert rat_arith(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)
    assert rat_arith(7, 7, "div") == 1
    assert rat_arith(60, 72, "div") == Fraction(5, 6)


def test_rat_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        rat_arith(1, 0, "div")


def test_rational_text_round_trip():
    assert parse_rational("-6/4") == Fraction(-3, 2)
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(Fraction(4, 2)) == "2"


def test_quad_examples():
    assert quad_arith(R3, R3, "mul") == 3
    assert quad_arith(QuadExt(0, Fraction(2, 3)), R3, "mul") == 2
    assert quad_arith(QuadExt(1, 1), QuadExt(1, -1), "mul") == -2


def test_quad_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        quad_arith(1, QuadExt(0, 0), "div")


def test_quad_is_immutable():
    a = QuadExt(1, 2)
    with pytest.raises(AttributeError):
        a.rat = 5


def test_quad_text_round_trip():
    a = QuadExt(Fraction(-1, 3), Fraction(5, 2))
    assert str(a) == "-1/3 + 5/2*sqrt3"
    assert QuadExt.parse(str(a)) == a


@given(quads, quads, quads)
def test_quad_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == 1


@given(quads, quads)
def test_norm_multiplicative(a, b):
    assert (a * b).norm() == a.norm() * b.norm()
    assert a * a.conjugate() == a.norm()


@given(rationals, rationals)
def test_rational_embedding_is_homomorphism(x, y):
    assert QuadExt(x) + QuadExt(y) == QuadExt(x + y)
    assert QuadExt(x) * QuadExt(y) == QuadExt(x * y)


@given(nonzero_rationals)
def test_rational_inverse(x):
    assert rat_arith(x, rat_arith(1, x, "div"), "mul") == 1


def test_double_factorial():
    assert double_factorial(5) == 15
    assert double_factorial(-1) == 1
    assert double_factorial(11) == 10395
    with pytest.raises(ValueError):
        double_factorial(-3)


@pytest.mark.parametrize("m", range(21))
def test_double_factorial_identity(m):
    assert double_factorial(2 * m - 1) * 2 ** m * factorial(m) == factorial(2 * m)


def test_gen_binomial_examples():
    assert gen_binomial(3, 2) == 3
    assert gen_binomial(Fraction(3, 2), 2) == Fraction(3, 8)
    assert gen_binomial(Fraction(-1, 2), 3) == Fraction(-5, 16)


@given(st.integers(0, 25), st.integers(0, 25))
def test_gen_binomial_integer_top(n, k):
    if k <= n:
        assert gen_binomial(n, k) == comb(n, k)
