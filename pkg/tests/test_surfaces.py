import pytest
from hypothesis import given, strategies as st

from polifz import operators as ops
from polifz.polyring import LAMBDA_Q, LAMBDA_Q_HAT, PHI, Polynomial, RingError, q
from polifz.surfaces import Component, Surface, SurfaceSum, cap, glue, rho, surfaces_up_to

S = lambda *shapes: SurfaceSum.single(Surface.of(*shapes))
EMPTY = SurfaceSum()


def test_glue_examples():
    assert glue(S((0, 3))) == SurfaceSum({Surface.of((1, 1)): 3})
    assert glue(S((0, 1), (0, 1))) == S((0, 0))
    assert glue(S((2, 0))) == EMPTY


def test_cap_examples():
    assert cap(S((0, 3))) == SurfaceSum({Surface.of((0, 1)): 3})
    assert cap(S((0, 2))) == S((0, 0))
    assert cap(S((0, 1))) == EMPTY


def test_rho_examples():
    assert rho(S((0, 3), (0, 3))) == Polynomial.var(LAMBDA_Q, q(3, 1), 2)
    assert rho(S((0, 1)), extended=True) == Polynomial.var(LAMBDA_Q_HAT, q(1, -1))
    assert rho(S((1, 0))) == Polynomial.var(LAMBDA_Q, q(0, 0))
    with pytest.raises(RingError):
        rho(S((0, 1)))


def test_labels_must_be_distinct():
    with pytest.raises(ValueError):
        Surface((Component(0, (0, 1)), Component(1, (1,))))
    with pytest.raises(ValueError):
        Component(0, (2, 2))


def test_zero_coefficients_dropped():
    assert (S((0, 3)) + SurfaceSum({Surface.of((0, 3)): -1})).terms == {}


shapes = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 4)), min_size=1, max_size=3)


@given(shapes)
def test_glue_preserves_euler_characteristic(sh):
    s = Surface.of(*sh)
    for t in glue(SurfaceSum.single(s)).terms:
        assert t.euler_characteristic == s.euler_characteristic
    for t in cap(SurfaceSum.single(s)).terms:
        assert t.euler_characteristic == s.euler_characteristic + 2


@given(shapes)
def test_glue_term_count(sh):
    s = Surface.of(*sh)
    b = sum(n for _, n in sh)
    assert sum(glue(SurfaceSum.single(s)).terms.values()) == b * (b - 1) // 2


def test_intertwining_small_family():
    for s in surfaces_up_to(3, 1, 3, negative_only=True):
        ss = SurfaceSum.single(s)
        assert rho(glue(ss)) == ops.gluing_plus().apply(rho(ss))
    for s in surfaces_up_to(3, 1, 3):
        ss = SurfaceSum.single(s)
        lhs = rho(glue(ss) + cap(ss), extended=True)
        rhs = ops.surface_plus(extended=True).apply(rho(ss, extended=True)).substitute({PHI: 1})
        assert lhs == rhs
