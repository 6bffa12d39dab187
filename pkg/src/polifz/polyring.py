"""Sparse multivariate polynomials over Q on the surface, xi, p and kappa alphabets.

Monomials are tuples of ``(Variable, exponent)`` pairs sorted by variable, with
no zero exponents, so they hash and compare structurally.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Tuple, Union

from .coeff import format_rational, parse_rational


class Kind(IntEnum):
    Q = 0
    PHI = 1
    XI = 2
    P = 3
    PSI = 4
    KAPPA = 5
    Z = 6
    T = 7
    FZP = 8


class Variable(NamedTuple):
    kind: Kind
    i: int = 0
    j: int = 0

    def __str__(self):
        k = self.kind
        if k is Kind.Q:
            return f"q[{self.i},{self.j}]"
        if k is Kind.P:
            return f"p[{self.i},{self.j}]"
        if k is Kind.XI:
            return f"xi[{self.i}]"
        if k is Kind.KAPPA:
            return f"kappa[{self.i}]"
        if k is Kind.FZP:
            return f"fzp[{self.i}]"
        return k.name.lower()


def q(i: int, j: int) -> Variable:
    return Variable(Kind.Q, i, j)


def p(i: int, j: int) -> Variable:
    return Variable(Kind.P, i, j)


def xi(i: int) -> Variable:
    return Variable(Kind.XI, i)


def kappa(i: int) -> Variable:
    return Variable(Kind.KAPPA, i)


def fzp(i: int) -> Variable:
    return Variable(Kind.FZP, i)


PHI = Variable(Kind.PHI)
PSI = Variable(Kind.PSI)
Z = Variable(Kind.Z)
T = Variable(Kind.T)

Monomial = Tuple[Tuple[Variable, int], ...]
ONE: Monomial = ()


class RingName(Enum):
    LambdaQ = "LambdaQ"
    LambdaQHat = "LambdaQHat"
    LambdaXi = "LambdaXi"
    LambdaXiHat = "LambdaXiHat"
    LambdaXiHatLaurentPhi = "LambdaXiHatLaurentPhi"
    PBasis = "PBasis"
    KappaRing = "KappaRing"
    FZRing = "FZRing"


@dataclass(frozen=True)
class Ring:
    name: RingName
    genus: Optional[int] = None

    def __post_init__(self):
        if self.genus is not None:
            if self.name is not RingName.PBasis:
                raise ValueError("genus only applies to the PBasis ring")
            if self.genus < 1:
                raise ValueError("genus must be positive")

    @property
    def laurent_phi(self) -> bool:
        return self.name is RingName.LambdaXiHatLaurentPhi

    def admits(self, v: Variable) -> bool:
        """Whether ``v`` is a generator of this ring (killed p's still count)."""
        n, k = self.name, v.kind
        if n in (RingName.LambdaQ, RingName.LambdaQHat):
            if k is Kind.PHI:
                return True
            if k is not Kind.Q:
                return False
            if v.i >= 0 and v.j >= 0 and (v.i - v.j) % 2 == 0:
                return True
            return n is RingName.LambdaQHat and (v.i, v.j) in ((0, -2), (1, -1))
        if n in (RingName.LambdaXi, RingName.LambdaXiHat, RingName.LambdaXiHatLaurentPhi):
            if k is Kind.PHI:
                return True
            lowest = 0 if n is RingName.LambdaXi else -1
            return k is Kind.XI and v.i >= lowest
        if n is RingName.PBasis:
            if k is Kind.PSI:
                return True
            return k is Kind.P and (v.i - v.j) % 2 == 0
        if n is RingName.KappaRing:
            return k is Kind.KAPPA and v.i >= 0
        if n is RingName.FZRing:
            if k in (Kind.T, Kind.Z):
                return True
            if k is Kind.KAPPA:
                return v.i >= 0
            return k is Kind.FZP and v.i >= 1 and v.i % 3 != 2
        raise AssertionError(n)

    def kills(self, v: Variable) -> bool:
        """Whether ``v`` is identically zero in this ring (out-of-range p classes)."""
        if self.name is not RingName.PBasis or v.kind is not Kind.P:
            return False
        if v.i < 0 or v.j < 0:
            return True
        return self.genus is not None and v.j > 2 * self.genus - 2

    def __str__(self):
        return self.name.value


LAMBDA_Q = Ring(RingName.LambdaQ)
LAMBDA_Q_HAT = Ring(RingName.LambdaQHat)
LAMBDA_XI = Ring(RingName.LambdaXi)
LAMBDA_XI_HAT = Ring(RingName.LambdaXiHat)
LAMBDA_XI_LAURENT = Ring(RingName.LambdaXiHatLaurentPhi)
P_BASIS = Ring(RingName.PBasis)
KAPPA_RING = Ring(RingName.KappaRing)
FZ_RING = Ring(RingName.FZRing)


class RingError(ValueError):
    """A variable, exponent or operand does not belong to the ring in use."""


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        e2 = exps.get(v, 0) + e
        if e2:
            exps[v] = e2
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


def monomial(exps: Mapping[Variable, int]) -> Monomial:
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def _check_monomial(ring: Ring, m: Monomial) -> None:
    for v, e in m:
        if not ring.admits(v):
            raise RingError(f"{v} is not a variable of {ring}")
        if e < 0 and not (v.kind is Kind.PHI and ring.laurent_phi):
            raise RingError(f"negative exponent on {v} in {ring}")


Scalar = Union[int, Fraction]


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps Monomial -> Fraction."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: Dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            m = monomial(dict(m))
            _check_monomial(ring, m)
            if any(ring.kills(v) for v, _ in m):
                continue
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.ring = ring
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: Dict[Monomial, Fraction]) -> Polynomial:
        # trusted path: caller guarantees canonical, admissible, nonzero terms
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, ring: Ring, c: Scalar) -> Polynomial:
        return cls(ring, {ONE: c})

    @classmethod
    def var(cls, ring: Ring, v: Variable, exp: int = 1) -> Polynomial:
        return cls(ring, {((v, exp),): 1})

    @classmethod
    def zero(cls, ring: Ring) -> Polynomial:
        return cls._raw(ring, {})

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> Optional[Polynomial]:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ring, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.ring)
            return Polynomial._raw(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self.terms) != 1:
                raise RingError("only monomials can be inverted")
            ((m, c),) = self.terms.items()
            inv = tuple((v, -e) for v, e in m)
            return Polynomial(self.ring, {inv: 1 / c}) ** (-k)
        result = Polynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def arith(self, other: Polynomial, op: str) -> Polynomial:
        if not isinstance(other, Polynomial) or other.ring != self.ring:
            raise RingError("poly_arith requires operands of the same ring")
        if op == "add":
            return self + other
        if op == "sub":
            return self - other
        if op == "mul":
            return self * other
        raise ValueError(f"unknown op {op!r}")

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {ONE: Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # structure ------------------------------------------------------------

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def coefficient(self, m: Union[Monomial, Mapping[Variable, int], Variable]) -> Fraction:
        if isinstance(m, Variable):
            m = ((m, 1),)
        elif isinstance(m, Mapping):
            m = monomial(m)
        return self.terms.get(tuple(m), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def with_ring(self, ring: Ring) -> Polynomial:
        """Reinterpret the same terms in ``ring`` (checked)."""
        return Polynomial(ring, self.terms)

    def derivative(self, v: Variable) -> Polynomial:
        if not self.ring.admits(v):
            raise RingError(f"{v} is not a variable of {self.ring}")
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            exps = dict(m)
            e = exps.get(v, 0)
            if e < 0:
                raise RingError(f"cannot differentiate a Laurent term in {v}")
            if e == 0:
                continue
            if e == 1:
                del exps[v]
            else:
                exps[v] = e - 1
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, 0) + c * e
        return Polynomial._raw(self.ring, {m: c for m, c in out.items() if c})

    def substitute(
        self,
        rules: Mapping[Variable, Union[Polynomial, Scalar]],
        target_ring: Optional[Ring] = None,
    ) -> Polynomial:
        """Simultaneous homomorphic substitution into ``target_ring``."""
        target = target_ring or self.ring
        images: Dict[Variable, Polynomial] = {}
        for v, img in rules.items():
            if isinstance(img, Polynomial):
                if img.ring != target:
                    img = img.with_ring(target)
            else:
                img = Polynomial.constant(target, img)
            images[v] = img
        powers: Dict[Tuple[Variable, int], Polynomial] = {}
        acc: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            factor_terms: Dict[Variable, int] = {}
            term = Polynomial.constant(target, c)
            for v, e in m:
                if v in images:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = images[v] ** e
                    term = term * powers[key]
                else:
                    if target.kills(v):
                        term = Polynomial.zero(target)
                        break
                    if not target.admits(v):
                        raise RingError(f"{v} has no rule and is not a variable of {target}")
                    factor_terms[v] = e
                if not term:
                    break
            if term and factor_terms:
                term = term * Polynomial(target, {monomial(factor_terms): 1})
            for tm, tc in term.terms.items():
                acc[tm] = acc.get(tm, 0) + tc
        return Polynomial._raw(target, {m: c for m, c in acc.items() if c})

    def phi_grade(self) -> Dict[int, Polynomial]:
        """Split by phi-exponent: ``{d: f_d}`` with ``f = sum phi^d * f_d``."""
        pieces: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            d = 0
            rest = []
            for v, e in m:
                if v.kind is Kind.PHI:
                    d = e
                else:
                    rest.append((v, e))
            pieces.setdefault(d, {})[tuple(rest)] = c
        return {d: Polynomial._raw(self.ring, t) for d, t in sorted(pieces.items())}

    def map_coefficients(self, fn) -> Polynomial:
        return Polynomial(self.ring, {m: fn(c) for m, c in self.terms.items()})

    # text / json ----------------------------------------------------------

    def sorted_terms(self):
        nonconst = sorted((m, c) for m, c in self.terms.items() if m)
        if ONE in self.terms:
            nonconst.append((ONE, self.terms[ONE]))
        return nonconst

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            factors = [str(v) if e == 1 else f"{v}^{e}" for v, e in m]
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = format_rational(mag) + "*" + "*".join(factors)
            if idx == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({self.ring}, {str(self)!r})"

    def to_json(self) -> dict:
        data = {
            "ring": self.ring.name.value,
            "terms": [
                {"coeff": format_rational(c), "vars": {str(v): e for v, e in m}}
                for m, c in self.sorted_terms()
            ],
        }
        if self.ring.genus is not None:
            data["genus"] = self.ring.genus
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)

    @classmethod
    def from_json(cls, data: Union[str, dict]) -> Polynomial:
        if isinstance(data, str):
            data = json.loads(data)
        ring = Ring(RingName(data["ring"]), data.get("genus"))
        terms: Dict[Monomial, Fraction] = {}
        for t in data["terms"]:
            m = monomial({parse_variable(k): e for k, e in t["vars"].items()})
            terms[m] = terms.get(m, 0) + parse_rational(t["coeff"])
        return cls(ring, terms)

    @classmethod
    def parse(cls, text: str, ring: Ring) -> Polynomial:
        return parse_polynomial(text, ring)


_VAR_RE = re.compile(
    r"(?P<two>q|p)\[(?P<a>-?\d+),(?P<b>-?\d+)\]"
    r"|(?P<one>xi|kappa|fzp)\[(?P<c>-?\d+)\]"
    r"|(?P<bare>phi|psi|z|t)(?![\w\[])"
)
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>(?:q|p)\[-?\d+,-?\d+\]|(?:xi|kappa|fzp)\[-?\d+\]|phi|psi|z|t)"
    r"|(?P<pow>\^\s*-?\d+)|(?P<op>[+\-*]))"
)


def parse_variable(text: str) -> Variable:
    m = _VAR_RE.fullmatch(text.strip())
    if not m:
        raise ValueError(f"unknown variable {text!r}")
    if m.group("two"):
        kind = Kind.Q if m.group("two") == "q" else Kind.P
        return Variable(kind, int(m.group("a")), int(m.group("b")))
    if m.group("one"):
        kind = {"xi": Kind.XI, "kappa": Kind.KAPPA, "fzp": Kind.FZP}[m.group("one")]
        return Variable(kind, int(m.group("c")))
    return {"phi": PHI, "psi": PSI, "z": Z, "t": T}[m.group("bare")]


def _tokenize(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        yield kind, m.group(kind).replace(" ", "")


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse the text format produced by ``str(Polynomial)``.

    Grammar: signed terms joined by ``+``/``-``; a term is ``*``-joined
    factors, each a rational literal or a variable with optional ``^int``.
    """
    tokens = list(_tokenize(text))
    if not tokens:
        raise ValueError("empty polynomial")
    terms: Dict[Monomial, Fraction] = {}
    idx = 0

    def take_factor():
        nonlocal idx
        if idx >= len(tokens):
            raise ValueError("dangling operator")
        kind, val = tokens[idx]
        idx += 1
        if kind == "num":
            c, exps = parse_rational(val), {}
        elif kind == "var":
            c, exps = Fraction(1), {parse_variable(val): 1}
        else:
            raise ValueError(f"unexpected {val!r}")
        if idx < len(tokens) and tokens[idx][0] == "pow":
            e = int(tokens[idx][1][1:])
            idx += 1
            if exps:
                exps = {v: e for v in exps}
            else:
                if e < 0:
                    raise ValueError("negative powers of numbers are not supported")
                c = c ** e
        return c, exps

    while idx < len(tokens):
        sign = 1
        while idx < len(tokens) and tokens[idx] in (("op", "+"), ("op", "-")):
            if tokens[idx][1] == "-":
                sign = -sign
            idx += 1
        coeff = Fraction(sign)
        exps: Dict[Variable, int] = {}
        c, e = take_factor()
        coeff *= c
        for v, k in e.items():
            exps[v] = exps.get(v, 0) + k
        while idx < len(tokens) and tokens[idx] == ("op", "*"):
            idx += 1
            c, e = take_factor()
            coeff *= c
            for v, k in e.items():
                exps[v] = exps.get(v, 0) + k
        m = monomial(exps)
        terms[m] = terms.get(m, 0) + coeff
        if idx < len(tokens) and tokens[idx][0] != "op":
            raise ValueError(f"unexpected token {tokens[idx][1]!r}")
        if idx < len(tokens) and tokens[idx] == ("op", "*"):
            raise ValueError("dangling '*'")
    return Polynomial(ring, terms)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    return a.arith(b, op)


def partial_derivative(f: Polynomial, v: Variable) -> Polynomial:
    return f.derivative(v)


def substitute(f: Polynomial, rules, target_ring: Optional[Ring] = None) -> Polynomial:
    return f.substitute(rules, target_ring)


def coefficient_of(f: Polynomial, m) -> Fraction:
    return f.coefficient(m)


def phi_grade(f: Polynomial) -> Dict[int, Polynomial]:
    return f.phi_grade()


def gens(ring: Ring, *variables: Variable) -> Tuple[Polynomial, ...]:
    return tuple(Polynomial.var(ring, v) for v in variables)


def from_terms(ring: Ring, items: Iterable[Tuple[Scalar, Mapping[Variable, int]]]) -> Polynomial:
    terms: Dict[Monomial, Fraction] = {}
    for c, exps in items:
        m = monomial(exps)
        terms[m] = terms.get(m, 0) + Fraction(c)
    return Polynomial(ring, terms)
