"""Exact scalars: rationals and the quadratic field Q(sqrt 3)."""

from __future__ import annotations

import operator
from fractions import Fraction
from math import factorial

Rational = Fraction

_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a reduced Fraction."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except ZeroDivisionError:
        raise ZeroDivisionError(f"zero denominator in {text!r}") from None


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rat_arith(a, b, op: str) -> Fraction:
    if op not in _OPS:
        raise ValueError(f"unknown op {op!r}")
    a, b = Fraction(a), Fraction(b)
    if op == "div" and b == 0:
        raise ZeroDivisionError("rational division by zero")
    return _OPS[op](a, b)


class QuadExt:
    """An element ``rat + irr*sqrt(3)`` of Q(sqrt 3)."""

    __slots__ = ("rat", "irr")

    def __init__(self, rat=0, irr=0):
        if isinstance(rat, QuadExt):
            if irr:
                raise TypeError("cannot combine QuadExt with an irrational part")
            rat, irr = rat.rat, rat.irr
        object.__setattr__(self, "rat", Fraction(rat))
        object.__setattr__(self, "irr", Fraction(irr))

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def sqrt3(cls) -> QuadExt:
        return cls(0, 1)

    @staticmethod
    def _coerce(other):
        if isinstance(other, QuadExt):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other)
        return None

    def norm(self) -> Fraction:
        return self.rat * self.rat - 3 * self.irr * self.irr

    def conjugate(self) -> QuadExt:
        return QuadExt(self.rat, -self.irr)

    def is_rational(self) -> bool:
        return self.irr == 0

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadExt(self.rat + other.rat, self.irr + other.irr)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.rat, -self.irr)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadExt(self.rat - other.rat, self.irr - other.irr)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadExt(
            self.rat * other.rat + 3 * self.irr * other.irr,
            self.rat * other.irr + self.irr * other.rat,
        )

    __rmul__ = __mul__

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        return QuadExt(self.rat / n, -self.irr / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = QuadExt(1)
        for _ in range(abs(k)):
            result = result * base
        return result

    def __bool__(self):
        return bool(self.rat) or bool(self.irr)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.rat == other.rat and self.irr == other.irr

    def __hash__(self):
        if self.irr == 0:
            return hash(self.rat)
        return hash((self.rat, self.irr))

    def __repr__(self):
        return f"QuadExt({format_rational(self.rat)}, {format_rational(self.irr)})"

    def __str__(self):
        return f"{format_rational(self.rat)} + {format_rational(self.irr)}*sqrt3"

    @classmethod
    def parse(cls, text: str) -> QuadExt:
        """Inverse of ``str``: accepts ``"a + b*sqrt3"``."""
        head, sep, tail = text.partition("+")
        tail = tail.strip()
        if not sep or not tail.endswith("*sqrt3"):
            raise ValueError(f"not a QuadExt literal: {text!r}")
        return cls(parse_rational(head), parse_rational(tail[: -len("*sqrt3")]))


def quad_arith(a, b, op: str) -> QuadExt:
    if op not in _OPS:
        raise ValueError(f"unknown op {op!r}")
    a, b = QuadExt(a), QuadExt(b)
    return _OPS[op](a, b)


def double_factorial(n: int) -> Fraction:
    """n!! with the empty-product convention (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return Fraction(result)


def gen_binomial(top, k: int) -> Fraction:
    """Generalized binomial top*(top-1)*...*(top-k+1)/k! for rational ``top``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    top = Fraction(top)
    num = Fraction(1)
    for m in range(k):
        num *= top - m
    return num / factorial(k)
