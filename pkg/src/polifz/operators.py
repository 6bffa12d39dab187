"""Gluing and capping differential operators on the surface rings.

Every operator is evaluated monomial by monomial over the variables actually
present, never over an index box.  In unextended mode an output variable that
is not a generator of Lambda_q (e.g. the disk q[1,-1]) kills the term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional

from .polyring import (
    LAMBDA_Q,
    LAMBDA_Q_HAT,
    LAMBDA_XI,
    LAMBDA_XI_LAURENT,
    ONE,
    P_BASIS,
    PHI,
    PSI,
    Kind,
    Monomial,
    Polynomial,
    Ring,
    RingError,
    RingName,
    Variable,
    monomial,
    p,
    q,
    xi,
)

HALF = Fraction(1, 2)


def _binom(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def operator_ring(extended: bool) -> Ring:
    return LAMBDA_Q_HAT if extended else LAMBDA_Q


def _prepare(f: Polynomial, extended: bool) -> Polynomial:
    ring = operator_ring(extended)
    if f.ring == ring:
        return f
    if extended and f.ring == LAMBDA_Q:
        return f.with_ring(ring)
    raise RingError(f"operator on {ring} cannot act on an element of {f.ring}")


def _edit(exps: Dict[Variable, int], remove, add) -> Monomial:
    out = dict(exps)
    for v in remove:
        e = out[v] - 1
        if e:
            out[v] = e
        else:
            del out[v]
    for v in add:
        out[v] = out.get(v, 0) + 1
    return tuple(sorted(out.items()))


def _accumulate(acc, m, c):
    s = acc.get(m, 0) + c
    if s:
        acc[m] = s
    else:
        acc.pop(m, None)


def _first_order(f: Polynomial, extended: bool, capping: bool) -> Dict[Monomial, Fraction]:
    ring = operator_ring(extended)
    acc: Dict[Monomial, Fraction] = {}
    dj = 2 if capping else 0
    for m, c in f.terms.items():
        exps = dict(m)
        for v, e in m:
            if v.kind is not Kind.Q:
                continue
            weight = _binom(v.i, 2) * e
            if not weight:
                continue
            target = q(v.i - 2, v.j - dj)
            if not ring.admits(target):
                continue
            add = (target, PHI) if capping else (target,)
            _accumulate(acc, _edit(exps, (v,), add), c * weight)
    return acc


def _second_order(f: Polynomial, extended: bool, capping: bool) -> Dict[Monomial, Fraction]:
    ring = operator_ring(extended)
    acc: Dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        exps = dict(m)
        qs = [(v, e) for v, e in m if v.kind is Kind.Q and v.i]
        for a in range(len(qs)):
            va, ea = qs[a]
            for b in range(a, len(qs)):
                vb, eb = qs[b]
                if a == b:
                    # (1/2) i^2 * e(e-1): the symmetric double sum on a repeated factor
                    weight = HALF * va.i * va.i * ea * (ea - 1)
                else:
                    weight = va.i * vb.i * ea * eb
                if not weight:
                    continue
                if capping:
                    ta = q(va.i - 1, va.j - 1)
                    tb = q(vb.i - 1, vb.j - 1)
                    if not (ring.admits(ta) and ring.admits(tb)):
                        continue
                    add = (ta, tb, PHI)
                else:
                    t = q(va.i + vb.i - 2, va.j + vb.j)
                    if not ring.admits(t):
                        continue
                    add = (t,)
                _accumulate(acc, _edit(exps, (va, vb), add), c * weight)
    return acc


def apply_d1(f: Polynomial, extended: bool = False) -> Polynomial:
    """One-component gluing: sum C(i,2) q[i-2,j] d/dq[i,j]."""
    f = _prepare(f, extended)
    return Polynomial._raw(f.ring, _first_order(f, extended, capping=False))


def apply_d2(f: Polynomial, extended: bool = False) -> Polynomial:
    """Two-component gluing: sum (1/2) i k q[i+k-2,j+l] d/dq[i,j] d/dq[k,l]."""
    f = _prepare(f, extended)
    return Polynomial._raw(f.ring, _second_order(f, extended, capping=False))


def apply_dpsi(f: Polynomial, extended: bool = False) -> Polynomial:
    """Two-component capping: sum (1/2) i k phi q[i-1,j-1] q[k-1,l-1] d/dq d/dq."""
    f = _prepare(f, extended)
    return Polynomial._raw(f.ring, _second_order(f, extended, capping=True))


def apply_dpsi_prime(f: Polynomial, extended: bool = False) -> Polynomial:
    """One-component capping: sum C(i,2) phi q[i-2,j-2] d/dq[i,j]."""
    f = _prepare(f, extended)
    return Polynomial._raw(f.ring, _first_order(f, extended, capping=True))


ATOMS = ("D1", "D2", "DPsi", "DPsiPrime")
_ATOM_IMPL = {
    "D1": lambda f, ext: _first_order(f, ext, capping=False),
    "D2": lambda f, ext: _second_order(f, ext, capping=False),
    "DPsi": lambda f, ext: _second_order(f, ext, capping=True),
    "DPsiPrime": lambda f, ext: _first_order(f, ext, capping=True),
}


@dataclass(frozen=True)
class DiffOperator:
    weights: Dict[str, Fraction] = field(default_factory=dict)
    extended: bool = False

    def __post_init__(self):
        unknown = set(self.weights) - set(ATOMS)
        if unknown:
            raise ValueError(f"unknown atomic operators {sorted(unknown)}")

    def __hash__(self):
        return hash((tuple(sorted(self.weights.items())), self.extended))

    def apply(self, f: Polynomial, power: int = 1) -> Polynomial:
        if power < 0:
            raise ValueError("power must be non-negative")
        f = _prepare(f, self.extended)
        for _ in range(power):
            acc: Dict[Monomial, Fraction] = {}
            for name in ATOMS:
                w = self.weights.get(name, 0)
                if not w:
                    continue
                for m, c in _ATOM_IMPL[name](f, self.extended).items():
                    _accumulate(acc, m, c * w)
            f = Polynomial._raw(f.ring, acc)
            if not f:
                break
        return f

    __call__ = apply

    def with_extended(self, extended: bool = True) -> DiffOperator:
        return DiffOperator(dict(self.weights), extended)


def _op(extended=False, **w) -> DiffOperator:
    return DiffOperator({k: Fraction(v) for k, v in w.items()}, extended)


def polishchuk(extended: bool = False) -> DiffOperator:
    return _op(extended, D1=1, D2=-1, DPsi=1)


def gluing_plus(extended: bool = False) -> DiffOperator:
    return _op(extended, D1=1, D2=1)


def gluing_minus(extended: bool = False) -> DiffOperator:
    return _op(extended, D1=1, D2=-1)


def surface_plus(extended: bool = False) -> DiffOperator:
    return _op(extended, D1=1, D2=1, DPsi=1, DPsiPrime=1)


def surface_minus(extended: bool = False) -> DiffOperator:
    return _op(extended, D1=1, D2=-1, DPsi=1, DPsiPrime=1)


NAMED_OPERATORS = {
    "polishchuk": polishchuk,
    "gluing-plus": gluing_plus,
    "gluing-minus": gluing_minus,
    "surface-plus": surface_plus,
    "surface-minus": surface_minus,
}


def apply_operator(op: DiffOperator, f: Polynomial, power: int = 1) -> Polynomial:
    return op.apply(f, power)


# --- p-basis ---------------------------------------------------------------


def geometric_D(f: Polynomial) -> Polynomial:
    """The restriction of the sl2 lowering operator to the p/psi ring."""
    if f.ring.name is not RingName.PBasis:
        raise RingError("geometric_D acts on the PBasis ring")
    ring = f.ring
    acc: Dict[Monomial, Fraction] = {}

    def emit(exps, remove, add, coeff):
        if not coeff:
            return
        if any(ring.kills(v) for v in add):
            return
        _accumulate(acc, _edit(exps, remove, add), coeff)

    for m, c in f.terms.items():
        exps = dict(m)
        ps = [(v, e) for v, e in m if v.kind is Kind.P]
        for v, e in ps:
            emit(exps, (v,), (p(v.i - 2, v.j),), c * e)
        for a in range(len(ps)):
            va, ea = ps[a]
            for b in range(a, len(ps)):
                vb, eb = ps[b]
                mult = HALF * ea * (ea - 1) if a == b else ea * eb
                if not mult:
                    continue
                emit(exps, (va, vb), (p(va.i - 1, va.j - 1), p(vb.i - 1, vb.j - 1), PSI), c * mult)
                glue = _binom(va.i + vb.i - 2, va.i - 1)
                emit(exps, (va, vb), (p(va.i + vb.i - 2, va.j + vb.j),), -c * mult * glue)
    return Polynomial._raw(ring, acc)


def change_of_basis(f: Polynomial, genus: Optional[int] = None) -> Polynomial:
    """q[i,j] -> i!/2^((i+j-2)/2) p[i,j], phi -> psi/4, killing out-of-range p."""
    if f.ring.name not in (RingName.LambdaQ, RingName.LambdaQHat):
        raise RingError("change_of_basis expects a Lambda_q element")
    target = Ring(RingName.PBasis, genus)
    rules = {PHI: Polynomial(target, {((PSI, 1),): Fraction(1, 4)})}
    for v in f.variables():
        if v.kind is Kind.Q:
            pv = p(v.i, v.j)
            if target.kills(pv):
                rules[v] = Polynomial.zero(target)
            else:
                scale = Fraction(factorial(v.i)) / Fraction(2) ** ((v.i + v.j - 2) // 2)
                rules[v] = Polynomial(target, {((pv, 1),): scale})
    return f.substitute(rules, target)


# --- inverse pullbacks ---------------------------------------------------


def _q0_index(v: Variable) -> int:
    if v.kind is Kind.PHI:
        return None
    if v.kind is not Kind.Q or v.i != 0:
        raise RingError(f"inverse pullback is only defined on q[0,2n] and phi, got {v}")
    return v.j // 2


def inverse_pullback(f: Polynomial) -> Polynomial:
    """q[0,2n] -> sum_r C(n+1,r+1) phi^(n-r) xi[r] + 2^(n+1) phi^n, into Lambda_xi."""
    rules = {PHI: Polynomial.var(LAMBDA_XI, PHI)}
    for v in f.variables():
        n = _q0_index(v)
        if n is None:
            continue
        if n < 0:
            raise RingError(f"{v} is outside the unextended inverse pullback")
        terms = {monomial({PHI: n - r, xi(r): 1}): comb(n + 1, r + 1) for r in range(n + 1)}
        terms[monomial({PHI: n})] = 2 ** (n + 1)
        rules[v] = Polynomial(LAMBDA_XI, terms)
    return f.substitute(rules, LAMBDA_XI)


def extended_inverse_pullback(f: Polynomial) -> Polynomial:
    """q[0,2n] -> xi[n] + phi^n (n >= -1), into Lambda_xi-hat[phi^-1]."""
    ring = LAMBDA_XI_LAURENT
    rules = {PHI: Polynomial.var(ring, PHI)}
    for v in f.variables():
        n = _q0_index(v)
        if n is None:
            continue
        rules[v] = Polynomial(ring, {((xi(n), 1),): 1, monomial({PHI: n}): 1})
    return f.substitute(rules, ring)


def q0_part(f: Polynomial) -> Polynomial:
    """Terms whose q-variables all have first index 0."""
    keep = {
        m: c for m, c in f.terms.items() if all(v.kind is not Kind.Q or v.i == 0 for v, _ in m)
    }
    return Polynomial._raw(f.ring, keep)


def rename_q0_to_xi(f: Polynomial, ring: Ring = LAMBDA_XI_LAURENT) -> Polynomial:
    rules = {PHI: Polynomial.var(ring, PHI)}
    for v in f.variables():
        n = _q0_index(v)
        if n is not None:
            rules[v] = Polynomial.var(ring, xi(n))
    return f.substitute(rules, ring)


# --- end-to-end checks ----------------------------------------------------


def verify_poli_vs_cminus(f: Polynomial) -> bool:
    """Compare the Polishchuk route with the extended negative-surface route.

    Both operator sums are finite: each application lowers the total first
    index by 2, so only the power reaching first index 0 survives the
    projection onto q[0,*] monomials.
    """
    for v in f.variables():
        if v.kind is Kind.Q and v.i != v.j + 2:
            raise RingError(f"{v} is not in the genus-zero subalgebra (need i = j + 2)")
        if v.kind not in (Kind.Q, Kind.PHI):
            raise RingError(f"unexpected variable {v}")
    f = f.with_ring(LAMBDA_Q)
    top = Polynomial.zero(LAMBDA_XI_LAURENT)
    bottom = Polynomial.zero(LAMBDA_XI_LAURENT)
    poli, cminus = polishchuk(), surface_minus(extended=True)
    g, h = f, f.with_ring(LAMBDA_Q_HAT)
    while g or h:
        top = top + inverse_pullback(q0_part(g)).with_ring(LAMBDA_XI_LAURENT)
        bottom = bottom + extended_inverse_pullback(q0_part(h))
        g, h = poli.apply(g), cminus.apply(h)
    bottom = bottom.substitute({xi(-1): 0})
    return top == bottom


@dataclass
class PipelineResult:
    k: int
    lhs_by_phi: Dict[int, Polynomial]
    rhs: Polynomial
    fz_target: Polynomial

    @property
    def positive_grades_vanish(self) -> bool:
        return all(not v for d, v in self.lhs_by_phi.items() if d != 0)

    @property
    def grade_zero_matches(self) -> bool:
        return self.lhs_by_phi.get(0, Polynomial.zero(self.rhs.ring)) == self.rhs

    def fz_ratio(self) -> Optional[Fraction]:
        """Scalar r with rhs == r * fz_target, or None if not proportional."""
        if not self.fz_target:
            return None
        m, c = next(iter(self.fz_target.terms.items()))
        r = self.rhs.coefficient(m) / c
        return r if r and self.rhs == self.fz_target * r else None

    @property
    def holds(self) -> bool:
        return self.positive_grades_vanish and self.grade_zero_matches


def main_theorem_pipeline(k: int) -> PipelineResult:
    if k < 1:
        raise ValueError("k must be positive")
    from .series import top_fz_relation

    start = Polynomial.var(LAMBDA_Q_HAT, q(3, 1), 2 * k)
    lifted = surface_minus(extended=True).apply(start, 3 * k)
    lhs = extended_inverse_pullback(lifted).substitute({xi(-1): 0, xi(0): 6 * k - 4})
    lhs_by_phi = lhs.phi_grade()

    glued = gluing_minus().apply(start.with_ring(LAMBDA_Q), 3 * k)
    rhs = rename_q0_to_xi(glued)

    fz = top_fz_relation(k)
    fz_target = fz.substitute(
        {v: Polynomial.var(LAMBDA_XI_LAURENT, xi(v.i)) for v in fz.variables()},
        LAMBDA_XI_LAURENT,
    )
    return PipelineResult(k, lhs_by_phi, rhs, fz_target)
