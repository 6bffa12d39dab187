"""Labeled-boundary surfaces with gluing and capping.

Only (genus, boundary count) bookkeeping is kept; labels exist so that the
number of ways to pick a pair of boundaries comes out right.  Surfaces are
stored in a canonical form (components sorted, labels renumbered), which is
exactly the homeomorphism class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Tuple

from .polyring import LAMBDA_Q, LAMBDA_Q_HAT, Polynomial, RingError, monomial, q


@dataclass(frozen=True, order=True)
class Component:
    genus: int
    labels: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("boundary labels must be distinct")

    @property
    def boundaries(self) -> int:
        return len(self.labels)

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundaries


@dataclass(frozen=True)
class Surface:
    components: Tuple[Component, ...]

    def __post_init__(self):
        seen = [l for c in self.components for l in c.labels]
        if len(set(seen)) != len(seen):
            raise ValueError("labels must be globally distinct")

    @classmethod
    def of(cls, *shapes: Tuple[int, int]) -> Surface:
        """Build from (genus, #boundaries) pairs with fresh labels."""
        comps, nxt = [], 0
        for genus, b in shapes:
            comps.append(Component(genus, tuple(range(nxt, nxt + b))))
            nxt += b
        return cls(tuple(comps)).canonical()

    def key(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted((c.genus, c.boundaries) for c in self.components))

    def canonical(self) -> Surface:
        comps, nxt = [], 0
        for genus, b in self.key():
            comps.append(Component(genus, tuple(range(nxt, nxt + b))))
            nxt += b
        return Surface(tuple(comps))

    @property
    def euler_characteristic(self) -> int:
        return sum(c.euler_characteristic for c in self.components)

    def _locate(self) -> Dict[int, int]:
        return {l: idx for idx, c in enumerate(self.components) for l in c.labels}

    def _pairs(self):
        where = self._locate()
        return [(a, b, where[a], where[b]) for a, b in combinations(sorted(where), 2)]

    def glued(self, a: int, b: int) -> Surface:
        where = self._locate()
        ca, cb = where[a], where[b]
        comps = list(self.components)
        if ca == cb:
            c = comps[ca]
            comps[ca] = Component(c.genus + 1, tuple(l for l in c.labels if l not in (a, b)))
        else:
            x, y = comps[ca], comps[cb]
            merged = Component(x.genus + y.genus, tuple(l for l in x.labels + y.labels if l not in (a, b)))
            comps = [c for i, c in enumerate(comps) if i not in (ca, cb)] + [merged]
        return Surface(tuple(comps)).canonical()

    def capped(self, a: int, b: int) -> Surface:
        comps = [Component(c.genus, tuple(l for l in c.labels if l not in (a, b))) for c in self.components]
        return Surface(tuple(comps)).canonical()


class SurfaceSum:
    """Finite rational combination of surfaces, keyed by homeomorphism class."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: Dict[Surface, Fraction] = {}
        for s, c in (terms or {}).items():
            s = s.canonical()
            clean[s] = clean.get(s, Fraction(0)) + Fraction(c)
        self.terms = {s: c for s, c in clean.items() if c}

    @classmethod
    def single(cls, surface: Surface, coeff=1) -> SurfaceSum:
        return cls({surface: coeff})

    def __add__(self, other: SurfaceSum) -> SurfaceSum:
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, Fraction(0)) + c
        return SurfaceSum(out)

    def __eq__(self, other):
        return isinstance(other, SurfaceSum) and self.terms == other.terms

    def __repr__(self):
        return "SurfaceSum(" + ", ".join(f"{c}*{s.key()}" for s, c in sorted(self.terms.items(), key=lambda t: t[0].key())) + ")"

    def _map_pairs(self, fn) -> SurfaceSum:
        out: Dict[Surface, Fraction] = {}
        for s, c in self.terms.items():
            for a, b, ca, cb in s._pairs():
                t = fn(s, a, b, ca, cb)
                if t is not None:
                    out[t] = out.get(t, Fraction(0)) + c
        return SurfaceSum(out)


def glue(s: SurfaceSum) -> SurfaceSum:
    """Sum over unordered pairs of boundary labels of the glued surface."""
    return s._map_pairs(lambda surf, a, b, ca, cb: surf.glued(a, b))


def cap(s: SurfaceSum) -> SurfaceSum:
    """Sum over unordered pairs of distinct boundaries, each filled by a disk."""
    return s._map_pairs(lambda surf, a, b, ca, cb: surf.capped(a, b))


def rho(s: SurfaceSum, extended: bool = False) -> Polynomial:
    """Send a connected surface with i boundaries and Euler characteristic -j to q[i,j]."""
    ring = LAMBDA_Q_HAT if extended else LAMBDA_Q
    total = Polynomial.zero(ring)
    for surf, c in s.terms.items():
        exps: Dict = {}
        for comp in surf.components:
            chi = comp.euler_characteristic
            if chi > 0 and not extended:
                raise RingError(f"component with positive Euler characteristic {chi} needs the extended ring")
            v = q(comp.boundaries, -chi)
            exps[v] = exps.get(v, 0) + 1
        total = total + Polynomial(ring, {monomial(exps): c})
    return total


def surfaces_up_to(max_components: int, max_genus: int, max_boundaries: int, negative_only: bool = False) -> Iterable[Surface]:
    """All homeomorphism classes with the stated bounds (non-empty)."""
    shapes = [
        (g, b)
        for g in range(max_genus + 1)
        for b in range(max_boundaries + 1)
        if not negative_only or 2 - 2 * g - b <= 0
    ]

    def rec(start: int, left: int):
        if left == 0:
            return
        for idx in range(start, len(shapes)):
            yield (shapes[idx],)
            for rest in rec(idx, left - 1):
                yield (shapes[idx],) + rest

    for combo in rec(0, max_components):
        yield Surface.of(*combo)
