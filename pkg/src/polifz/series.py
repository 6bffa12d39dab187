"""Truncated multivariate power series and the generating functions built on them.

A series is truncated by a weighted degree: each variable has a non-negative
integer weight and every stored monomial has weight <= ``order``.  The default
weights grade by the first variable only, which is what the graph series need
(every monomial of T_rr, G_0^c, G_+^c and G_-^lf carries a power of x).
Coefficients may be Fractions, QuadExt values, or Polynomials (for series
whose coefficients are kappa polynomials).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .coeff import QuadExt, double_factorial, format_rational, gen_binomial
from .polyring import KAPPA_RING, Polynomial, kappa, monomial

Exps = Tuple[int, ...]


class SeriesError(ValueError):
    pass


class Series:
    __slots__ = ("variables", "order", "weights", "coeffs")

    def __init__(self, variables, coeffs=None, order: int = 0, weights=None):
        self.variables = tuple(variables)
        n = len(self.variables)
        self.weights = tuple(weights) if weights is not None else (1,) + (0,) * (n - 1)
        if len(self.weights) != n or any(w < 0 for w in self.weights):
            raise SeriesError("one non-negative weight per variable required")
        self.order = order
        clean = {}
        for e, c in (coeffs or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise SeriesError(f"exponent {e} does not match variables {self.variables}")
            if c and self._deg(e) <= order:
                clean[e] = c
        self.coeffs: Dict[Exps, object] = clean

    # construction -------------------------------------------------------

    def _deg(self, e: Exps) -> int:
        return sum(w * k for w, k in zip(self.weights, e))

    def _like(self, coeffs) -> Series:
        out = Series.__new__(Series)
        out.variables, out.order, out.weights = self.variables, self.order, self.weights
        out.coeffs = coeffs
        return out

    @classmethod
    def constant(cls, variables, c, order, weights=None) -> Series:
        n = len(tuple(variables))
        return cls(variables, {(0,) * n: c}, order, weights)

    @classmethod
    def gen(cls, variables, name, order, weights=None) -> Series:
        variables = tuple(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {e: Fraction(1)}, order, weights)

    @classmethod
    def univariate(cls, name: str, coefficients: Iterable, order: int) -> Series:
        return cls((name,), {(k,): c for k, c in enumerate(coefficients)}, order)

    def one(self) -> Series:
        return self._like({(0,) * len(self.variables): Fraction(1)})

    def zero(self) -> Series:
        return self._like({})

    # access -------------------------------------------------------------

    def __getitem__(self, key):
        if isinstance(key, int):
            key = (key,)
        return self.coeffs.get(tuple(key), Fraction(0))

    def coeff(self, **powers):
        unknown = set(powers) - set(self.variables)
        if unknown:
            raise SeriesError(f"unknown variables {sorted(unknown)}")
        return self[tuple(powers.get(v, 0) for v in self.variables)]

    def constant_term(self):
        return self[(0,) * len(self.variables)]

    def coefficients(self, n: Optional[int] = None) -> List:
        """Univariate coefficient list up to ``n`` (default: order)."""
        if len(self.variables) != 1:
            raise SeriesError("coefficients() is for univariate series")
        n = self.order if n is None else n
        return [self[k] for k in range(n + 1)]

    @property
    def field(self) -> str:
        if any(isinstance(c, QuadExt) and c.irr for c in self.coeffs.values()):
            return "Q(sqrt3)"
        return "Q"

    def _check(self, other: Series):
        if self.variables != other.variables or self.weights != other.weights:
            raise SeriesError("series over different variables or gradings")

    def truncate(self, order: int) -> Series:
        return Series(self.variables, self.coeffs, min(order, self.order), self.weights)

    # ring operations ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Series):
            other = self.one() * other
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Series(self.variables, out, min(self.order, other.order), self.weights)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            if not other:
                return self.zero()
            return self._like({e: c * other for e, c in self.coeffs.items()})
        self._check(other)
        order = min(self.order, other.order)
        w = self.weights
        a = [(e, c, self._deg(e)) for e, c in self.coeffs.items()]
        b = [(e, c, self._deg(e)) for e, c in other.coeffs.items()]
        out: Dict[Exps, object] = {}
        for e1, c1, d1 in a:
            for e2, c2, d2 in b:
                if d1 + d2 > order:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Series(self.variables, out, order, w)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result, base = self.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def _split(self):
        """Return (constant term, remainder); remainder must be nilpotent."""
        c0 = self.constant_term()
        zero = (0,) * len(self.variables)
        rest = self._like({e: c for e, c in self.coeffs.items() if e != zero})
        if rest.coeffs and min(rest._deg(e) for e in rest.coeffs) == 0:
            raise SeriesError("a non-constant term has weight 0; the expansion would not terminate")
        return c0, rest

    def _nilpotency(self, rest: Series) -> int:
        if not rest.coeffs:
            return 0
        return self.order // min(rest._deg(e) for e in rest.coeffs)

    def _power_sum(self, rest: Series, coefficients) -> Series:
        """sum_k coefficients(k) * rest^k, truncated."""
        n = self._nilpotency(rest)
        out = self.one() * coefficients(0)
        term = self.one()
        for k in range(1, n + 1):
            term = term * rest
            if not term.coeffs:
                break
            ck = coefficients(k)
            if ck:
                out = out + term * ck
        return out

    def inverse(self) -> Series:
        c0, rest = self._split()
        if not c0:
            raise SeriesError("constant term is zero; series is not invertible")
        inv0 = 1 / (Fraction(c0) if isinstance(c0, int) else c0)
        return self._power_sum(rest * inv0, lambda k: (-1) ** k) * inv0

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.inverse()
        return self * (1 / Fraction(other) if isinstance(other, int) else 1 / other)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def exp(self) -> Series:
        c0, rest = self._split()
        if c0:
            raise SeriesError("exp needs a zero constant term")
        return self._power_sum(rest, lambda k: Fraction(1, factorial(k)))

    def log(self) -> Series:
        c0, rest = self._split()
        if c0 != 1:
            raise SeriesError("log needs constant term 1")
        return self._power_sum(rest, lambda k: Fraction((-1) ** (k + 1), k) if k else 0)

    def pow(self, exponent) -> Series:
        """Generalized binomial power; the constant term must be 1."""
        c0, rest = self._split()
        if c0 != 1:
            raise SeriesError("fractional power needs constant term 1; factor the constant out")
        exponent = Fraction(exponent)
        return self._power_sum(rest, lambda k: gen_binomial(exponent, k))

    def compose_into(self, outer: Sequence) -> Series:
        """sum_k outer[k] * self^k (Horner); self must have zero constant term."""
        c0, rest = self._split()
        if c0:
            raise SeriesError("inner series must have zero constant term")
        n = min(len(outer) - 1, self._nilpotency(rest))
        out = self.zero()
        for k in range(n, -1, -1):
            out = out * rest + self.one() * outer[k]
        return out

    def map_coefficients(self, fn) -> Series:
        return Series(self.variables, {e: fn(c) for e, c in self.coeffs.items()}, self.order, self.weights)

    def embed(self, variables, weights=None, order=None) -> Series:
        """Re-express over a larger variable list (missing variables get exponent 0)."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.variables]
        out = {}
        for e, c in self.coeffs.items():
            new = [0] * len(variables)
            for pos, k in zip(idx, e):
                new[pos] = k
            out[tuple(new)] = c
        return Series(variables, out, self.order if order is None else order, weights)

    def differentiate(self, name: str) -> Series:
        i = self.variables.index(name)
        out = {}
        for e, c in self.coeffs.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[e2] = c * e[i]
        return Series(self.variables, out, self.order - self.weights[i], self.weights)

    def __eq__(self, other):
        if isinstance(other, Series):
            if self.variables != other.variables or self.weights != other.weights:
                return False
            order = min(self.order, other.order)
            a = {e: c for e, c in self.coeffs.items() if self._deg(e) <= order}
            b = {e: c for e, c in other.coeffs.items() if other._deg(e) <= order}
            return a == b
        if not self.coeffs:
            return not other
        return self.coeffs == {(0,) * len(self.variables): other}

    def __hash__(self):
        return hash((self.variables, self.order, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"Series({self.variables}, order={self.order}, terms={len(self.coeffs)})"

    def to_json(self) -> list:
        out = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if isinstance(c, QuadExt):
                cj = {"rat": format_rational(c.rat), "irr": format_rational(c.irr)}
            elif isinstance(c, Polynomial):
                cj = str(c)
            else:
                cj = format_rational(c)
            out.append({"exponents": {v: k for v, k in zip(self.variables, e) if k}, "coeff": cj})
        return out


def series_arith(a: Series, b: Series, op: str) -> Series:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def series_exp_log(a: Series, op: str) -> Series:
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    raise ValueError(f"unknown op {op!r}")


def series_pow(a: Series, exponent) -> Series:
    return a.pow(exponent)


def compose(outer: Series, inner: Series) -> Series:
    if len(outer.variables) != 1:
        raise SeriesError("outer series must be univariate")
    return inner.compose_into(outer.coefficients())


# --- Faber-Zagier series ------------------------------------------------------


def fz_coefficient(n: int) -> Fraction:
    return Fraction(factorial(6 * n), factorial(3 * n) * factorial(2 * n))


def faber_zagier_A(order: int, scale=1, name: str = "z") -> Series:
    """A(scale*z) = sum (6n)!/((3n)!(2n)!) (scale*z/72)^n."""
    scale = Fraction(scale)
    return Series.univariate(name, (fz_coefficient(n) * (scale / 72) ** n for n in range(order + 1)), order)


def beta_coefficients(max_n: int) -> List[Fraction]:
    """[beta_2, beta_4, ..., beta_{2 max_n}] read off log A(9 z^2)."""
    if max_n > 6:
        raise SeriesError("beta extraction is bounded to max_n <= 6")
    order = 2 * max_n
    a = faber_zagier_A(max_n, scale=9)
    a9z2 = Series.univariate("z", (a[k // 2] if k % 2 == 0 else 0 for k in range(order + 1)), order)
    log = a9z2.log()
    return [log[2 * n] * factorial(3 * n) * factorial(2 * n) for n in range(1, max_n + 1)]


def beta_coefficient(index: int) -> Fraction:
    """beta_{index}; zero for odd index."""
    if index % 2:
        return Fraction(0)
    return beta_coefficients(index // 2)[-1]


def partitions(n: int, largest: Optional[int] = None):
    """Integer partitions of n as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def top_fz_relation(k: int, scale=1) -> Polynomial:
    """z^k coefficient of exp(-{log A(scale*z)}_kappa) as a kappa polynomial."""
    if k > 6:
        raise SeriesError("top FZ relation is bounded to k <= 6")
    c = faber_zagier_A(k, scale).log()
    terms = {}
    for lam in partitions(k):
        mult: Dict[int, int] = {}
        for part in lam:
            mult[part] = mult.get(part, 0) + 1
        coeff = Fraction(1)
        for part, m in mult.items():
            coeff *= (-c[part]) ** m / factorial(m)
        if coeff:
            terms[monomial({kappa(part): m for part, m in mult.items()})] = coeff
    return Polynomial(KAPPA_RING, terms)


@dataclass
class FZRelation:
    genus: int
    n: int
    sigma: Tuple[int, ...]
    relation: Polynomial

    def to_json(self) -> dict:
        return {"genus": self.genus, "n": self.n, "sigma": list(self.sigma), "relation": self.relation.to_json()}


def is_valid_fz_index(g: int, n: int, sigma: Sequence[int]) -> bool:
    size = sum(sigma)
    return g - 1 + size < 3 * n and (g - n - size - 1) % 2 == 0


def _psi_parts(sigma: Sequence[int]) -> Tuple[int, ...]:
    for part in sigma:
        if part < 1 or part % 3 == 2:
            raise SeriesError(f"partition part {part} must be positive and not 2 mod 3")
    return tuple(sorted(set(sigma)))


def psi_series(sigma: Sequence[int], t_order: int) -> Series:
    """Psi(t, p) restricted to the p-variables occurring in ``sigma``.

    Variables are ``t`` then ``p<i>`` for each distinct part; every variable has
    weight 1 and the order is ``t_order + len(sigma)``, enough to read the
    coefficient of t^n p^sigma for n <= t_order.
    """
    parts = _psi_parts(sigma)
    names = ("t",) + tuple(f"p{i}" for i in parts)
    order = t_order + len(sigma)
    weights = (1,) * len(names)
    zero = (0,) * len(names)
    b = {}
    c = {}
    for m in range(order + 1):
        e = (m,) + zero[1:]
        b[e] = fz_coefficient(m)
        c[e] = fz_coefficient(m) * Fraction(6 * m + 1, 6 * m - 1)
    B = Series(names, b, order, weights)
    C = Series(names, c, order, weights)
    first = {zero: Fraction(1)}
    second = {}
    for idx, part in enumerate(parts, start=1):
        e = [0] * len(names)
        e[idx] = 1
        e[0] = part // 3
        (first if part % 3 == 0 else second)[tuple(e)] = Fraction(1)
    return Series(names, first, order, weights) * B + Series(names, second, order, weights) * C


def psi_alpha(sigma: Sequence[int], t_order: int) -> Dict[Tuple[int, Tuple[int, ...]], Fraction]:
    """alpha_n(tau) for all sub-monomials tau of p^sigma and n <= t_order."""
    log = psi_series(sigma, t_order).log()
    parts = _psi_parts(sigma)
    out = {}
    for e, c in log.coeffs.items():
        if e[0] > t_order:
            continue
        tau = tuple(sorted(p for p, k in zip(parts, e[1:]) for _ in range(k)))
        out[(e[0], tau)] = c
    return out


def general_fz_relation(g: int, n: int, sigma: Sequence[int] = ()) -> FZRelation:
    """[exp(-gamma)]_{t^n p^sigma} with kappa_0 evaluated to 2g - 2."""
    sigma = tuple(sorted(sigma, reverse=True))
    parts = _psi_parts(sigma)
    if not is_valid_fz_index(g, n, sigma):
        raise SeriesError(f"not a valid FZ index: g={g}, n={n}, sigma={list(sigma)}")
    log = psi_series(sigma, n).log()

    def kappa_poly(m: int) -> Polynomial:
        if m == 0:
            return Polynomial.constant(KAPPA_RING, 2 * g - 2)
        return Polynomial.var(KAPPA_RING, kappa(m))

    gamma = Series(
        log.variables,
        {e: kappa_poly(e[0]) * c for e, c in log.coeffs.items()},
        log.order,
        log.weights,
    )
    relation = (-gamma).exp()
    target = (n,) + tuple(sigma.count(p) for p in parts)
    value = relation[target]
    if not isinstance(value, Polynomial):
        value = Polynomial.constant(KAPPA_RING, value)
    return FZRelation(g, n, sigma, value)


# --- graph generating functions ---------------------------------------------

GF_NAMES = ("Trr", "G0", "G0c", "Gplus", "GplusC", "GminusLF")
XY = ("x", "y")


def _in_xy(univariate_in_s: Series, order: int, shift: Tuple[int, int] = (0, 0)) -> Series:
    """Map s^m to x^(m+dx) y^(m+dy) (s stands for xy)."""
    dx, dy = shift
    out = {}
    for (m,), c in univariate_in_s.coeffs.items():
        if m + dx < 0:
            if c:
                raise SeriesError("negative x power after shift")
            continue
        out[(m + dx, m + dy)] = c
    return Series(XY, out, order)


def _one_minus_12s(order: int) -> Series:
    return Series.univariate("s", [Fraction(1), Fraction(-12)], order)


def closed_form_gf(name: str, order: int) -> Series:
    """Closed forms of the graph generating functions, x-graded to ``order``."""
    if order > 12:
        raise SeriesError("closed forms are bounded to order <= 12")
    if name == "GminusLF":
        return Series.univariate(
            "x",
            (double_factorial(3 * k - 1) / factorial(k) if k % 2 == 0 else 0 for k in range(order + 1)),
            order,
        )
    if name == "Trr":
        return _in_xy(_one_minus_12s(order).pow(Fraction(-1, 2)) - 1, order)
    if name == "G0":
        return _in_xy(_one_minus_12s(order).pow(Fraction(-1, 4)), order)
    if name == "G0c":
        return _in_xy(_one_minus_12s(order).log() * Fraction(-1, 4), order)
    if name in ("GplusC", "Gplus"):
        # (1-Q)^3 (1+3Q) / (864 x^2) with Q = sqrt(1-12xy); the s-series starts at s^3
        s_order = order + 2
        Q = _one_minus_12s(s_order).pow(Fraction(1, 2))
        h = (1 - Q) ** 3 * (1 + Q * 3) * Fraction(1, 864)
        gc = _in_xy(h, order, shift=(-2, 0))
        return gc if name == "GplusC" else gc.exp()
    raise SeriesError(f"unknown generating function {name!r}")


MASTER_VARS = ("x", "y", "z", "w", "u")


def master_series(order: int) -> Series:
    """exp(z T_rr) / (exp(w G_0^c) G_+ G_-^lf(x u)), graded by x-degree."""
    if order > 8:
        raise SeriesError("master series is bounded to order <= 8")
    up = lambda s: s.embed(MASTER_VARS)
    z = Series.gen(MASTER_VARS, "z", order)
    w = Series.gen(MASTER_VARS, "w", order)
    trr = up(closed_form_gf("Trr", order))
    g0c = up(closed_form_gf("G0c", order))
    gpc = up(closed_form_gf("GplusC", order))
    xu = Series(MASTER_VARS, {(1, 0, 0, 0, 1): Fraction(1)}, order)
    gm = closed_form_gf("GminusLF", order)
    inv_gm = gm.inverse()
    return (z * trr).exp() * (-(w * g0c)).exp() * (-gpc).exp() * xu.compose_into(inv_gm.coefficients())


def omega_evaluation(n: int, order: int, omega: Optional[Series] = None) -> Series:
    """Collapse the master series to a series in x by the monomial substitution
    x^a y^b z^c w^d u^e -> (b-1)!! c! C(3e/2 + 3n, c) (3a + 6n - 3)^d x^a (0 if b odd).
    """
    if order > 8:
        raise SeriesError("omega evaluation is bounded to order <= 8")
    omega = omega if omega is not None else master_series(order)
    out: Dict[Tuple[int], Fraction] = {}
    for (a, b, c, d, e), coeff in omega.coeffs.items():
        if b % 2 or a > order:
            continue
        weight = (
            double_factorial(b - 1)
            * factorial(c)
            * gen_binomial(Fraction(3 * e, 2) + 3 * n, c)
            * Fraction(3 * a + 6 * n - 3) ** d
        )
        out[(a,)] = out.get((a,), 0) + coeff * weight
    return Series(("x",), out, order)


# --- evaluation chain of the master series ------------------------------------


def _q_power(exponent, order: int, variables=XY) -> Series:
    """Q^exponent = (1 - 12xy)^(exponent/2), x-graded."""
    s = _in_xy(_one_minus_12s(order).pow(Fraction(exponent) / 2), order)
    return s.embed(variables) if variables != XY else s


def substitute_zu(n: int, order: int) -> Series:
    """Replace z^c u^e in e^{z T_rr}/G_-^lf(xu) by c! C(3e/2 + 3n, c); a series in x, y."""
    names = ("x", "y", "z", "u")
    z = Series.gen(names, "z", order)
    trr = closed_form_gf("Trr", order).embed(names)
    xu = Series(names, {(1, 0, 0, 1): Fraction(1)}, order)
    inv_gm = closed_form_gf("GminusLF", order).inverse()
    full = (z * trr).exp() * xu.compose_into(inv_gm.coefficients())
    out: Dict[Exps, Fraction] = {}
    for (a, b, c, e), coeff in full.coeffs.items():
        key = (a, b)
        out[key] = out.get(key, 0) + coeff * factorial(c) * gen_binomial(Fraction(3 * e, 2) + 3 * n, c)
    return Series(XY, out, order)


def substitute_zu_closed(n: int, order: int) -> Series:
    """Q^{-3n} / G_-^lf(x Q^{-3/2}), expanded term by term in x."""
    gamma = closed_form_gf("GminusLF", order).inverse()
    total = Series(XY, {}, order)
    for m in range(order + 1):
        if gamma[m]:
            xm = Series(XY, {(m, 0): gamma[m]}, order)
            total = total + xm * _q_power(Fraction(-3 * m, 2) - 3 * n, order)
    return total


def w_evaluation_holds(n: int, order: int) -> bool:
    """exp(-w G_0^c) at w = 3v + 6n - 3 equals Q^{(3v-3)/2 + 3n}.

    Each coefficient is a polynomial in v of degree at most the x-degree, so it
    suffices to compare at v = 0..order.
    """
    g0c = closed_form_gf("G0c", order)
    for v in range(order + 1):
        lhs = (g0c * (-(3 * v + 6 * n - 3))).exp()
        if lhs != _q_power(Fraction(3 * v - 3, 2) + 3 * n, order):
            return False
    return True


def omega_prime_evaluation(order: int) -> Series:
    """Substitute x^a y^b v^c -> (b-1)!! a^c x^a (0 for odd b) in Q^{(3v-3)/2}/G_+."""
    names = ("x", "y", "v")
    log_q = _in_xy(_one_minus_12s(order).log() * Fraction(1, 2), order).embed(names)
    v = Series.gen(names, "v", order)
    base = _q_power(Fraction(-3, 2), order, names) * (v * log_q * Fraction(3, 2)).exp()
    base = base * (-closed_form_gf("GplusC", order).embed(names)).exp()
    out: Dict[Tuple[int], Fraction] = {}
    for (a, b, c), coeff in base.coeffs.items():
        if b % 2:
            continue
        out[(a,)] = out.get((a,), 0) + coeff * double_factorial(b - 1) * Fraction(a) ** c
    return Series(("x",), out, order)


def evaluation_chain_checks(n: int, order: int) -> Dict[str, bool]:
    """The z/u substitution, the w evaluation and the simplified-series relation."""
    if order > 6:
        raise SeriesError("evaluation chain is bounded to order <= 6")
    gm = closed_form_gf("GminusLF", order)
    prime = omega_prime_evaluation(order)
    return {
        "zu_substitution": substitute_zu(n, order) == substitute_zu_closed(n, order),
        "w_evaluation": w_evaluation_holds(n, order),
        "simplified_relation": omega_evaluation(n, order) * gm == prime,
        "simplified_equals_GminusLF": prime == gm,
    }


# --- diagonal identities -----------------------------------------------------------


def _q_x(order: int) -> Series:
    """Q_x = sqrt(1 - 12x) as a univariate series in x."""
    return Series.univariate("x", [Fraction(1), Fraction(-12)], order).pow(Fraction(1, 2))


def _diagonal_target(n: int) -> Fraction:
    return Fraction(factorial(6 * n) * factorial(n), factorial(3 * n) * factorial(2 * n) ** 2)


def _third_root_power(m: int) -> QuadExt:
    """3^{-m/2} in Q(sqrt 3)."""
    if m % 2 == 0:
        return QuadExt(Fraction(1, 3 ** (m // 2)))
    return QuadExt(0, Fraction(1, 3 ** ((m + 1) // 2)))


def _kernel(n_exp: int, order: int, q: Series) -> Series:
    """Q^{(3N-3)/2} (1+Q)^{N+1} ((1+2Q)/3)^{-(N+1)/2} for N = n_exp; rational."""
    normalized = (q * 2 + 1) * Fraction(1, 3)
    return q.pow(Fraction(3 * n_exp - 3, 2)) * (q + 1) ** (n_exp + 1) * normalized.pow(Fraction(-(n_exp + 1), 2))


def rationalized_identity(n: int) -> Tuple[Fraction, Fraction]:
    """x^{2n} coefficient of (2n-1)!! (3/4)^{(2n+1)/2} Q^{(6n-3)/2}(1+Q)^{2n+1}(1+2Q)^{-(2n+1)/2}
    against (6n-1)!!/(2n)!.  The constants (3/4)^{m/2} 3^{-m/2} combine to 2^{-m}.
    """
    order = 2 * n
    q = _q_x(order)
    lhs = _kernel(2 * n, order, q)[2 * n] * double_factorial(2 * n - 1) / 2 ** (2 * n + 1)
    return lhs, double_factorial(6 * n - 1) / factorial(2 * n)


def raw_diagonal_coefficient(n: int) -> Tuple[QuadExt, QuadExt]:
    """(xy)^{2n} coefficient of Q^{(6n-3)/2}(1+Q)^{2n+1}(2Q+1)^{-(2n+1)/2} over Q(sqrt 3),
    against (6n)! n!/((3n)!(2n)!(2n)!) (2/sqrt3)(1/3)^n.
    """
    order = 2 * n
    q = _in_xy(_one_minus_12s(order).pow(Fraction(1, 2)), order)
    normalized = (q * 2 + 1) * Fraction(1, 3)
    m = 2 * n + 1
    expr = q.pow(Fraction(6 * n - 3, 2)) * (q + 1) ** m * normalized.pow(Fraction(-m, 2))
    lhs = _third_root_power(m) * expr[(2 * n, 2 * n)]
    rhs = QuadExt(0, Fraction(2, 3)) * _diagonal_target(n) / 3 ** n
    return lhs, rhs


def bivariate_F(order: int) -> Series:
    """F(x, t) = sum_N Q^{(3N-3)/2}(1+Q)^{N+1}(2Q+1)^{-(N+1)/2} t^N over Q(sqrt 3), total degree <= order."""
    q = _q_x(order)
    names = ("x", "t")
    weights = (1, 1)
    terms = {}
    for N in range(order + 1):
        row = _kernel(N, order - N, q.truncate(order - N))
        const = _third_root_power(N + 1)
        for (a,), c in row.coeffs.items():
            terms[(a, N)] = const * c
    return Series(names, terms, order, weights)


def implicit_U(order: int) -> Series:
    """U(z) near (0, 1) with 144 z^2 = U^3 - 3U + 2, over Q(sqrt 3).

    Writing U = 1 + z*eta gives eta = 4 sqrt3 (1 + z eta/3)^{-1/2}; iterate.
    """
    four_root3 = QuadExt(0, 4)
    eta = Series.constant(("z",), four_root3, order)
    z = Series.gen(("z",), "z", order + 1)
    for _ in range(order + 1):
        inner = Series(("z",), (z.truncate(order) * eta * Fraction(1, 3)).coeffs, order) + 1
        eta = inner.pow(Fraction(-1, 2)) * four_root3
    u = Series(("z",), {(k + 1,): c for (k,), c in eta.coeffs.items()}, order + 1)
    return u + 1


def ode_residual(y: Series, upto: int) -> List:
    """Coefficients of 20y + 108 z y' + (36 z^2 - 1) y'' through z^upto."""
    d1 = y.differentiate("z")
    d2 = d1.differentiate("z")
    out = []
    for k in range(upto + 1):
        zy1 = d1[k - 1] if k >= 1 else 0
        z2y2 = d2[k - 2] if k >= 2 else 0
        out.append(20 * y[k] + 108 * zy1 + 36 * z2y2 - d2[k])
    return out


def diagonal_series(order: int, literal: bool = False) -> Series:
    """sum a_n z^{2n}/3^n with a_n = (6n)! n!/((3n)!(2n)!(2n)!); ``literal`` uses (z/3)^{2n}."""
    coeffs = {}
    for n in range(order // 2 + 1):
        coeffs[(2 * n,)] = _diagonal_target(n) / (9 ** n if literal else 3 ** n)
    return Series(("z",), coeffs, order)


def diagonal_checks(n_max: int, order: int = 20) -> Dict[str, object]:
    if n_max > 4:
        raise SeriesError("diagonal checks are bounded to n_max <= 4")
    report: Dict[str, object] = {}
    report["rationalized"] = {n: rationalized_identity(n) for n in range(n_max + 1)}
    raw_n = min(n_max, 3)
    report["raw"] = {n: raw_diagonal_coefficient(n) for n in range(raw_n + 1)}
    y = diagonal_series(order + 2)
    report["ode_residual"] = ode_residual(y, order)
    report["ode_residual_literal"] = ode_residual(diagonal_series(order + 2, literal=True), order)
    diag_order = 2 * raw_n
    u = implicit_U(diag_order + 3)
    u_prime = u.differentiate("z") * Fraction(1, 6)
    report["U_prime_ode_residual"] = ode_residual(u_prime.truncate(diag_order + 2), diag_order)
    even = {(k,): c for (k,), c in u_prime.coeffs.items() if k % 2 == 0}
    scaled = Series(("z",), even, diag_order) == y.truncate(diag_order).map_coefficients(
        lambda c: QuadExt(0, Fraction(2, 3)) * c
    )
    report["U_prime_even_part_matches"] = scaled
    F = bivariate_F(2 * diag_order)
    report["bivariate_diagonal"] = {
        n: (F[(2 * n, 2 * n)], raw_diagonal_coefficient(n)[1]) for n in range(raw_n + 1)
    }
    report["bivariate_vs_U_prime"] = all(F[(m, m)] == u_prime[m] for m in range(diag_order + 1))
    report["holds"] = (
        all(a == b for a, b in report["rationalized"].values())
        and all(a == b for a, b in report["raw"].values())
        and not any(report["ode_residual"])
        and not any(report["U_prime_ode_residual"])
        and scaled
        and all(a == b for a, b in report["bivariate_diagonal"].values())
        and report["bivariate_vs_U_prime"]
    )
    return report
