"""Ordered trivalent graphs, cores and insertion forests, and enumeration oracles.

An ordered trivalent graph on n vertices is a partial matching of the 3n
half-edges 3v, 3v+1, 3v+2; unmatched half-edges are leaves.  Because every
half-edge carries its own label, matchings and ordered isomorphism classes are
the same thing here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import permutations, product
from math import comb, factorial
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .coeff import double_factorial
from .polyring import LAMBDA_Q_HAT, PHI, Polynomial, monomial, q

MAX_VERTICES = 6
KINDS = ("any", "negative", "zero", "positive")


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """(V, H, tau, iota) with V = range(n_vertices) and H = range(len(target)).

    The per-vertex half-edge order is increasing half-edge index.
    """

    n_vertices: int
    target: Tuple[int, ...]
    involution: Tuple[int, ...]

    def __post_init__(self):
        if len(self.target) != len(self.involution):
            raise GraphError("target and involution must have the same length")
        for h, k in enumerate(self.involution):
            if not 0 <= k < len(self.involution) or self.involution[k] != h:
                raise GraphError(f"involution fails at half-edge {h}")
        if any(not 0 <= v < self.n_vertices for v in self.target):
            raise GraphError("target out of range")

    @classmethod
    def trivalent(cls, n_vertices: int, involution: Sequence[int]) -> Graph:
        if len(involution) != 3 * n_vertices:
            raise GraphError("a trivalent graph on n vertices has 3n half-edges")
        return cls(n_vertices, tuple(h // 3 for h in range(3 * n_vertices)), tuple(involution))

    @classmethod
    def from_pairs(cls, n_vertices: int, pairs: Sequence[Tuple[int, int]]) -> Graph:
        inv = list(range(3 * n_vertices))
        for a, b in pairs:
            if inv[a] != a or inv[b] != b or a == b:
                raise GraphError(f"half-edges {a}, {b} already used")
            inv[a], inv[b] = b, a
        return cls.trivalent(n_vertices, inv)

    # basic structure --------------------------------------------------

    @property
    def n_halfedges(self) -> int:
        return len(self.target)

    def halfedges_of(self, v: int) -> List[int]:
        return [h for h, t in enumerate(self.target) if t == v]

    def valence(self, v: int) -> int:
        return sum(1 for t in self.target if t == v)

    def is_trivalent(self) -> bool:
        return all(self.valence(v) in (1, 3) for v in range(self.n_vertices))

    def edges(self) -> List[Tuple[int, int]]:
        return [(h, k) for h, k in enumerate(self.involution) if h < k]

    def leaves(self) -> List[int]:
        return [h for h, k in enumerate(self.involution) if h == k]

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges())

    def components(self) -> List[List[int]]:
        """Vertex sets of connected components, each sorted, in order of least vertex."""
        parent = list(range(self.n_vertices))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in self.edges():
            ra, rb = find(self.target[a]), find(self.target[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: Dict[int, List[int]] = {}
        for v in range(self.n_vertices):
            groups.setdefault(find(v), []).append(v)
        return [groups[r] for r in sorted(groups)]

    def component_stats(self) -> List[Tuple[int, int, int]]:
        """Per component: (vertices, leaves, Euler characteristic)."""
        comp_of = {}
        comps = self.components()
        for idx, vs in enumerate(comps):
            for v in vs:
                comp_of[v] = idx
        n_edges = [0] * len(comps)
        n_leaves = [0] * len(comps)
        for h, k in enumerate(self.involution):
            c = comp_of[self.target[h]]
            if h == k:
                n_leaves[c] += 1
            elif h < k:
                n_edges[c] += 1
        return [(len(vs), n_leaves[i], len(vs) - n_edges[i]) for i, vs in enumerate(comps)]

    def is_connected(self) -> bool:
        return self.n_vertices > 0 and len(self.components()) == 1

    def encode(self) -> str:
        """Vertex count, sorted matched pairs, sorted leaves."""
        return json.dumps([self.n_vertices, [list(e) for e in self.edges()], self.leaves()], separators=(",", ":"))

    @classmethod
    def decode(cls, text: str) -> Graph:
        n, pairs, _leaves = json.loads(text)
        return cls.from_pairs(n, [tuple(p) for p in pairs])


def euler_characteristic(g: Graph) -> int:
    return g.euler_characteristic()


def _require_trivalent(g: Graph):
    if not g.is_trivalent():
        raise GraphError("graph is not trivalent")


# --- superfluous half-edges and the core ----------------------------------------


def _far_side_is_tree(g: Graph, h: int) -> bool:
    """Delete the edge {h, iota(h)}; is the part containing tau(iota(h)) a tree not containing tau(h)?"""
    k = g.involution[h]
    start, home = g.target[k], g.target[h]
    adj: Dict[int, List[Tuple[int, int]]] = {}
    for a, b in g.edges():
        if (a, b) == (min(h, k), max(h, k)):
            continue
        adj.setdefault(g.target[a], []).append((g.target[b], a))
        adj.setdefault(g.target[b], []).append((g.target[a], a))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w, _ in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if home in seen:
        return False
    inner_edges = sum(1 for a, b in g.edges() if g.target[a] in seen and (a, b) != (min(h, k), max(h, k)))
    return len(seen) - inner_edges == 1


def superfluous_halfedges(g: Graph) -> Set[int]:
    """Leaves, and half-edges pointing toward a tree."""
    _require_trivalent(g)
    out = set()
    for h, k in enumerate(g.involution):
        if h == k or _far_side_is_tree(g, h):
            out.add(h)
    return out


def superfluous_vertices(g: Graph, sup: Optional[Set[int]] = None) -> Set[int]:
    sup = superfluous_halfedges(g) if sup is None else sup
    return {g.target[h] for h in sup}


def involution_sequence(g: Graph, h: int, sup: Set[int], core: Set[int]) -> List[int]:
    """(h_0, ..., h_n) with h_n the induced partner of the core half-edge h_0."""
    seq = [h]
    while True:
        nxt = g.involution[seq[-1]]
        seq.append(nxt)
        v = g.target[nxt]
        if v in core:
            return seq
        others = [x for x in g.halfedges_of(v) if x != nxt and x not in sup]
        if len(others) != 1:
            raise GraphError("superfluous vertex on a core path must have exactly one other non-superfluous half-edge")
        seq.append(others[0])


@dataclass
class CoreDecomposition:
    core: Graph
    insertion_forest: Graph
    root_pairs: List[Tuple[int, int]]
    core_vertices: List[int]
    forest_vertices: List[int]
    core_halfedges: List[int] = field(default_factory=list)
    forest_halfedges: List[int] = field(default_factory=list)

    def insertion_trees(self) -> List[List[int]]:
        return self.insertion_forest.components() if self.insertion_forest.n_vertices else []


def _induced(g: Graph, vertices: List[int]) -> Tuple[List[int], Dict[int, int], List[int]]:
    halfedges = [h for h in range(g.n_halfedges) if g.target[h] in set(vertices)]
    new_h = {h: i for i, h in enumerate(halfedges)}
    new_v = {v: i for i, v in enumerate(vertices)}
    return halfedges, new_h, [new_v[g.target[h]] for h in halfedges]


def core_decomposition(g: Graph) -> CoreDecomposition:
    _require_trivalent(g)
    for n_v, _n_l, chi in g.component_stats():
        if chi >= 0:
            raise GraphError("every component needs negative Euler characteristic")
    sup = superfluous_halfedges(g)
    sup_v = superfluous_vertices(g, sup)
    core_v = [v for v in range(g.n_vertices) if v not in sup_v]
    forest_v = sorted(sup_v)
    core_set = set(core_v)

    core_h, core_idx, core_target = _induced(g, core_v)
    core_inv = [0] * len(core_h)
    roots: Dict[int, Tuple[int, int]] = {}
    for h in core_h:
        seq = involution_sequence(g, h, sup, core_set)
        core_inv[core_idx[h]] = core_idx[seq[-1]]
        if len(seq) > 2 and h < seq[-1]:
            roots[h] = (seq[1], seq[-2])
    core = Graph(len(core_v), tuple(core_target), tuple(core_inv))

    forest_h, forest_idx, forest_target = _induced(g, forest_v)
    forest_set = set(forest_h)
    forest_inv = [forest_idx[g.involution[h]] if g.involution[h] in forest_set else forest_idx[h] for h in forest_h]
    forest = Graph(len(forest_v), tuple(forest_target), tuple(forest_inv))
    root_pairs = [(forest_idx[a], forest_idx[b]) for _, (a, b) in sorted(roots.items())]
    return CoreDecomposition(core, forest, root_pairs, core_v, forest_v, core_h, forest_h)


def reinsert(core: Graph, forest: Graph, root_pairs: Sequence[Tuple[int, int]], core_edges: Sequence[Tuple[int, int]]) -> Graph:
    """Insert the i-th tree between the ends of the i-th chosen core edge.

    Core vertices come first, then forest vertices, each keeping its order.
    """
    if len(root_pairs) != len(core_edges):
        raise GraphError("one core edge per insertion tree")
    off_v, off_h = core.n_vertices, core.n_halfedges
    target = list(core.target) + [v + off_v for v in forest.target]
    inv = list(core.involution) + [k + off_h for k in forest.involution]
    for (r1, r2), (a, b) in zip(root_pairs, core_edges):
        if core.involution[a] != b:
            raise GraphError(f"({a}, {b}) is not a core edge")
        r1, r2 = r1 + off_h, r2 + off_h
        inv[a], inv[r1] = r1, a
        inv[b], inv[r2] = r2, b
    return Graph(core.n_vertices + forest.n_vertices, tuple(target), tuple(inv))


# --- enumeration ------------------------------------------------------------------


def _matchings(n_half: int, leaf_free: bool, leaves: Optional[int]) -> Iterator[List[int]]:
    inv = [-1] * n_half

    def rec(start: int, used_leaves: int):
        h = start
        while h < n_half and inv[h] != -1:
            h += 1
        if h == n_half:
            if leaves is None or used_leaves == leaves:
                yield list(inv)
            return
        remaining = sum(1 for x in range(h, n_half) if inv[x] == -1)
        can_leaf = not leaf_free and (leaves is None or used_leaves < leaves)
        if leaves is not None and (remaining - (leaves - used_leaves)) % 2:
            return
        if can_leaf:
            inv[h] = h
            yield from rec(h + 1, used_leaves + 1)
            inv[h] = -1
        if leaves is None or remaining - 1 >= leaves - used_leaves:
            for k in range(h + 1, n_half):
                if inv[k] == -1:
                    inv[h], inv[k] = k, h
                    yield from rec(h + 1, used_leaves)
                    inv[h] = inv[k] = -1

    yield from rec(0, 0)


def _kind_ok(stats, kind: str) -> bool:
    if kind == "any":
        return True
    if kind == "negative":
        return all(chi < 0 for _, _, chi in stats)
    if kind == "zero":
        return all(chi == 0 for _, _, chi in stats)
    if kind == "positive":
        return all(chi > 0 for _, _, chi in stats)
    raise GraphError(f"unknown component kind {kind!r}")


def enumerate_ordered_trivalent(
    n_vertices: int,
    kind: str = "any",
    connected: bool = False,
    leaf_free: bool = False,
    leaves: Optional[int] = None,
) -> Iterator[Graph]:
    """Every ordered trivalent graph on n vertices passing the filters (a generator)."""
    if n_vertices > MAX_VERTICES:
        raise GraphError(f"enumeration is bounded to {MAX_VERTICES} vertices")
    if kind not in KINDS:
        raise GraphError(f"unknown component kind {kind!r}")
    if n_vertices == 0:
        if not connected:
            yield Graph(0, (), ())
        return
    for inv in _matchings(3 * n_vertices, leaf_free, leaves):
        g = Graph.trivalent(n_vertices, inv)
        if connected or kind != "any":
            stats = g.component_stats()
            if connected and len(stats) != 1:
                continue
            if not _kind_ok(stats, kind):
                continue
        yield g


def count_ordered(n_vertices: int, **filters) -> Dict[int, int]:
    """Counts by number of leaves."""
    out: Dict[int, int] = {}
    for g in enumerate_ordered_trivalent(n_vertices, **filters):
        m = len(g.leaves())
        out[m] = out.get(m, 0) + 1
    return out


@lru_cache(maxsize=None)
def count_trees(n_vertices: int) -> int:
    """Ordered trivalent trees on n vertices (each has n + 2 leaves)."""
    return sum(1 for _ in enumerate_ordered_trivalent(n_vertices, kind="positive", connected=True, leaves=n_vertices + 2))


def count_rooted_trees(n_vertices: int) -> int:
    """Ordered trivalent trees with one distinguished leaf."""
    return count_trees(n_vertices) * (n_vertices + 2)


def rooted_tree_formula(n: int) -> int:
    return factorial(2 * n) // factorial(n + 1) * 3 ** n


def count_doubly_rooted_trees(n_vertices: int) -> int:
    """Ordered trivalent trees with an ordered pair of distinct root leaves."""
    m = n_vertices + 2
    return count_trees(n_vertices) * m * (m - 1)


# --- isomorphism-class representatives -------------------------------------------


def _structures(n: int, connected: bool) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[Tuple[int, ...], ...]]]:
    """(loops, leaves, symmetric multiplicity matrix) with every vertex of degree 3."""
    mult = [[0] * n for _ in range(n)]
    loops = [0] * n
    leaves = [0] * n
    deg = [0] * n

    def rec(v: int, u: int):
        if v == n:
            yield tuple(loops), tuple(leaves), tuple(tuple(r) for r in mult)
            return
        if u == n:
            free = 3 - deg[v]
            for lp in range(free // 2 + 1):
                loops[v], leaves[v] = lp, free - 2 * lp
                yield from rec(v + 1, v + 2)
            loops[v] = leaves[v] = 0
            return
        room = min(3 - deg[v], 3 - deg[u])
        for m in range(room + 1):
            mult[v][u] = mult[u][v] = m
            deg[v] += m
            deg[u] += m
            yield from rec(v, u + 1)
            deg[v] -= m
            deg[u] -= m
        mult[v][u] = mult[u][v] = 0

    for s in rec(0, 1):
        if not connected or _structure_connected(n, s[2]):
            yield s


def _structure_connected(n: int, mult) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in range(n):
            if mult[v][u] and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def _canonical(n: int, s) -> tuple:
    """Least encoding over vertex orders that sort vertices by a local invariant."""
    loops, leaves, mult = s
    inv = [(loops[v], leaves[v], tuple(sorted(mult[v]))) for v in range(n)]
    blocks: Dict[tuple, List[int]] = {}
    for v in range(n):
        blocks.setdefault(inv[v], []).append(v)
    block_list = [blocks[k] for k in sorted(blocks)]
    best = None
    for choice in product(*(permutations(b) for b in block_list)):
        perm = [v for part in choice for v in part]
        key = (
            tuple(loops[p] for p in perm),
            tuple(leaves[p] for p in perm),
            tuple(mult[perm[i]][perm[j]] for i in range(n) for j in range(i + 1, n)),
        )
        if best is None or key < best:
            best = key
    return (tuple(sorted(inv)),) + best


def _structure_to_graph(n: int, s) -> Graph:
    loops, leaves, mult = s
    nxt = [3 * v for v in range(n)]

    def slot(v):
        h = nxt[v]
        nxt[v] += 1
        return h

    pairs = []
    for v in range(n):
        for _ in range(loops[v]):
            pairs.append((slot(v), slot(v)))
        for u in range(v + 1, n):
            for _ in range(mult[v][u]):
                pairs.append((slot(v), slot(u)))
    return Graph.from_pairs(n, pairs)


def trivalent_class_representatives(n_vertices: int, connected: bool = True) -> List[Graph]:
    """One ordered representative per isomorphism class of (unordered) trivalent graphs."""
    if n_vertices > MAX_VERTICES:
        raise GraphError(f"enumeration is bounded to {MAX_VERTICES} vertices")
    seen = {}
    for s in _structures(n_vertices, connected):
        key = _canonical(n_vertices, s)
        if key not in seen:
            seen[key] = _structure_to_graph(n_vertices, s)
    return [seen[k] for k in sorted(seen)]


# --- graph-sum oracle ------------------------------------------------------------------


def graph_sum_oracle(k: int, allow_k2: bool = False) -> Polynomial:
    """(3k)! sum_r (2r-1)!! phi^r sum over ordered graphs with 2k vertices and 2r leaves
    of prod over components of -q[0, -2 chi(component)]."""
    if k < 1 or k > 2 or (k == 2 and not allow_k2):
        raise GraphError("graph-sum oracle supports k = 1 (k = 2 behind a flag)")
    acc: Dict[tuple, Fraction] = {}
    for g in enumerate_ordered_trivalent(2 * k):
        r = len(g.leaves()) // 2
        exps: Dict = {PHI: r} if r else {}
        sign = 1
        for _v, _l, chi in g.component_stats():
            var = q(0, -2 * chi)
            exps[var] = exps.get(var, 0) + 1
            sign = -sign
        m = monomial(exps)
        acc[m] = acc.get(m, Fraction(0)) + sign * double_factorial(2 * r - 1)
    scale = factorial(3 * k)
    return Polynomial(LAMBDA_Q_HAT, {m: c * scale for m, c in acc.items()})


# --- enumeration counts against the closed forms ------------------------------------


def gf_counts(name: str, n_vertices: int) -> Dict[int, Fraction]:
    """Enumeration count for one generating function at x^n, as {y-degree: coefficient},
    already divided by n! (exponential in x, ordinary in y)."""
    n = n_vertices
    out: Dict[int, Fraction] = {}
    if name == "GminusLF":
        raw = count_ordered(n, leaf_free=True)
    elif name == "G0":
        raw = count_ordered(n, kind="zero")
    elif name == "G0c":
        raw = count_ordered(n, kind="zero", connected=True)
    elif name == "GplusC":
        raw = {n + 2: count_trees(n)} if n else {}
    elif name == "Gplus":
        raw = count_ordered(n, kind="positive")
    elif name == "Trr":
        raw = {n: count_doubly_rooted_trees(n)} if n else {}
    else:
        raise GraphError(f"unknown generating function {name!r}")
    for m, c in raw.items():
        if c:
            out[m] = Fraction(c, factorial(n))
    return out


def binomial_insertion_count(core: Graph, n_trees: int) -> int:
    return comb(len(core.edges()), n_trees)


def class_key(g: Graph) -> tuple:
    """Isomorphism-class key of a trivalent graph (forgets all orders)."""
    _require_trivalent(g)
    n = g.n_vertices
    loops = [0] * n
    leaves = [0] * n
    mult = [[0] * n for _ in range(n)]
    for a, b in g.edges():
        u, v = g.target[a], g.target[b]
        if u == v:
            loops[u] += 1
        else:
            mult[u][v] += 1
            mult[v][u] += 1
    for h in g.leaves():
        leaves[g.target[h]] += 1
    return _canonical(n, (tuple(loops), tuple(leaves), tuple(tuple(r) for r in mult)))


def core_decomposition_holds(g: Graph) -> bool:
    """Euler characteristic kept, core leaf-free trivalent, two input-external roots per tree."""
    d = core_decomposition(g)
    chi = g.euler_characteristic()
    if d.core.euler_characteristic() != chi or d.core.leaves() or not d.core.is_trivalent():
        return False
    if d.core.n_vertices and any(d.core.valence(v) != 3 for v in range(d.core.n_vertices)):
        return False
    input_leaves = {d.forest_halfedges.index(h) for h in g.leaves() if h in d.forest_halfedges}
    for tree in d.insertion_trees():
        tree_set = set(tree)
        external = [h for h in d.insertion_forest.leaves() if d.insertion_forest.target[h] in tree_set and h not in input_leaves]
        if len(external) != 2:
            return False
    if len(d.root_pairs) != len(d.insertion_trees()):
        return False
    return True


def decomposition_family(max_vertices: int = MAX_VERTICES, exhaustive_up_to: int = 4) -> Iterator[Graph]:
    """Connected trivalent graphs with negative Euler characteristic: every ordered graph
    up to ``exhaustive_up_to`` vertices, one representative per class beyond that."""
    for n in range(1, max_vertices + 1):
        if n <= exhaustive_up_to:
            for g in enumerate_ordered_trivalent(n, kind="negative", connected=True):
                yield g
        else:
            for g in trivalent_class_representatives(n):
                if g.euler_characteristic() < 0:
                    yield g
