"""Symmetry reduction for the relaxation programs.

Permutation groups act on vertices; invariance of the weight vector lets the
SDP restrict to invariant matrices.  For a vertex-transitive action the
whole program collapses to one normalized PSD matrix with a single
link-membership constraint at a base vertex; invariance is imposed by
identifying variables along orbits of vertex pairs inside the full-size
block rather than by block-diagonalizing the commutant, which keeps the
code free of representation theory at these instance sizes.

The triangle-encoding family (vertices = edges of a complete graph, edges =
triangles) is solved in closed form: its pair orbits form the two-class
Johnson scheme, whose eigenvalues turn the reduced program into an exact
two-variable rational LP with optimum n^2/4.

All functions are pure; concurrent calls are safe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .hypercore import Hypergraph, HypergraphError, check_weights
from .numlin import solve_lp
from .thetabody import _Builder, _membership_node, _solved
from .hypercore import link

__all__ = [
    "PermGroup",
    "OrbitStructure",
    "group_elements",
    "vertex_orbits",
    "pair_orbits",
    "verify_automorphisms",
    "is_transitive",
    "theta_transitive",
    "invariant_membership_reduction",
    "mantel_hypergraph",
    "symmetric_group_pair_action",
    "mantel_pair_orbit_matrices",
    "mantel_theta",
    "cyclic_group",
    "dihedral_group",
]

PAIR_CLOSURE_CAP = 10**7
ELEMENT_CAP = 10**5


@dataclass(frozen=True)
class PermGroup:
    """A permutation group on 0..degree-1 given by generators."""

    degree: int
    generators: tuple

    def __init__(self, degree: int, generators):
        gens = []
        for g in generators:
            t = tuple(g)
            if sorted(t) != list(range(degree)):
                raise HypergraphError(f"generator {t} is not a bijection on [0,{degree})")
            gens.append(t)
        object.__setattr__(self, "degree", int(degree))
        object.__setattr__(self, "generators", tuple(gens))


@dataclass(frozen=True)
class OrbitStructure:
    vertex_orbits: tuple
    pair_orbits: tuple  # tuples of ordered pairs
    representatives: tuple
    sizes: tuple

    def orbit_of(self, x: int, y: int) -> int:
        return self._index[(x, y)]

    def __post_init__(self):
        index = {}
        for k, orbit in enumerate(self.pair_orbits):
            for p in orbit:
                index[p] = k
        object.__setattr__(self, "_index", index)


def group_elements(group: PermGroup, cap: int = ELEMENT_CAP) -> list[tuple]:
    """All group elements by breadth-first closure over the generators."""
    n = group.degree
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for el in frontier:
            for g in group.generators:
                comp = tuple(g[el[i]] for i in range(n))
                if comp not in seen:
                    if len(seen) >= cap:
                        raise HypergraphError(f"group exceeds element cap {cap}")
                    seen.add(comp)
                    nxt.append(comp)
        frontier = nxt
    return sorted(seen)


def vertex_orbits(group: PermGroup) -> list[list[int]]:
    n = group.degree
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = [start]
        seen[start] = True
        queue = [start]
        while queue:
            x = queue.pop()
            for g in group.generators:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
                    queue.append(y)
        orbits.append(sorted(orbit))
    return orbits


def pair_orbits(group: PermGroup, n: int | None = None, cap: int = PAIR_CLOSURE_CAP) -> OrbitStructure:
    """Orbits of ordered vertex pairs under the diagonal action."""
    if n is None:
        n = group.degree
    if n != group.degree:
        raise HypergraphError("group degree does not match vertex count")
    if n * n > cap:
        raise HypergraphError(f"pair closure would exceed cap {cap}")
    seen = [[False] * n for _ in range(n)]
    orbits = []
    for sx in range(n):
        for sy in range(n):
            if seen[sx][sy]:
                continue
            orbit = [(sx, sy)]
            seen[sx][sy] = True
            queue = [(sx, sy)]
            while queue:
                x, y = queue.pop()
                for g in group.generators:
                    p = (g[x], g[y])
                    if not seen[p[0]][p[1]]:
                        seen[p[0]][p[1]] = True
                        orbit.append(p)
                        queue.append(p)
            orbits.append(tuple(sorted(orbit)))
    orbits = tuple(sorted(orbits))
    return OrbitStructure(
        vertex_orbits=tuple(tuple(o) for o in vertex_orbits(group)),
        pair_orbits=orbits,
        representatives=tuple(o[0] for o in orbits),
        sizes=tuple(len(o) for o in orbits),
    )


def verify_automorphisms(hg: Hypergraph, group: PermGroup) -> bool:
    """True iff every generator maps every edge to an edge."""
    if group.degree != hg.n:
        return False
    present = hg.edge_set()
    for g in group.generators:
        for e in hg.edges:
            if tuple(sorted(g[v] for v in e)) not in present:
                return False
    return True


def is_transitive(group: PermGroup) -> bool:
    return len(vertex_orbits(group)) <= 1


# ---------------------------------------------------------------------------
# Vertex-transitive reduction
# ---------------------------------------------------------------------------

def theta_transitive(hg: Hypergraph, group: PermGroup, x0: int = 0, tol: float = 1e-8) -> float:
    """Unit-weight relaxation value via the transitive reduction.

    Solves the full-size PSD program with variables identified along pair
    orbits, normalized diagonal at x0, and the link-membership block imposed
    at x0 only; orbit identification makes that single row constraint
    suffice.
    """
    if hg.r < 2:
        raise HypergraphError("transitive reduction needs uniformity at least 2")
    if not verify_automorphisms(hg, group):
        raise HypergraphError("group does not preserve the edge set")
    if not is_transitive(group):
        raise HypergraphError("group is not vertex transitive")
    if not 0 <= x0 < hg.n:
        raise HypergraphError("base vertex out of range")

    orbits = pair_orbits(group, hg.n)
    builder = _Builder()
    blk = builder.block(hg.n)
    builder.add([(blk, x0, x0, 1.0)], 1.0)
    for orbit in orbits.pair_orbits:
        ax, ay = orbit[0]
        for x, y in orbit[1:]:
            if x > y:
                continue  # symmetric entry already tied
            builder.add([(blk, x, y, 1.0), (blk, ax, ay, -1.0)], 0.0)

    sub, smap = link(hg, x0)
    if sub.n:
        if sub.r == 1:
            for v in smap:
                builder.add([(blk, x0, v, 1.0)], 0.0)
        else:
            child = _membership_node(builder, sub, smap)
            builder.add([(child.blk, 0, 0, 1.0), (blk, x0, x0, -1.0)], 0.0)
            for j, v in enumerate(smap):
                builder.add(
                    [(child.blk, j + 1, j + 1, 1.0), (blk, x0, v, -1.0)], 0.0
                )

    cobj = np.full((hg.n, hg.n), 1.0 / hg.n)
    problem = builder.problem({blk: cobj})
    sol = _solved(problem, tol, "theta_transitive")
    return float(sol.primal)


def invariant_membership_reduction(hg: Hypergraph, group: PermGroup, f, tol: float = 1e-6) -> bool:
    """Membership test for invariant vectors under a vertex-transitive group.

    Such a vector is constant, f = c * ones, and belongs to the body iff
    c >= 0 and c * n is at most the unit-weight relaxation value.
    """
    fv = [float(v) for v in check_weights(hg, f)]
    orbits = vertex_orbits(group)
    for orbit in orbits:
        vals = {fv[x] for x in orbit}
        if max(vals) - min(vals) > 1e-12:
            raise HypergraphError("vector is not invariant under the group")
    if not is_transitive(group):
        raise HypergraphError("reduction implemented for vertex-transitive groups")
    c = fv[0] if fv else 0.0
    if c < -1e-12:
        return False
    if c == 0.0 or hg.n == 0:
        return True
    value = theta_transitive(hg, group)
    return c * hg.n <= value + tol


# ---------------------------------------------------------------------------
# The triangle-encoding family
# ---------------------------------------------------------------------------

def _pair_list(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def mantel_hypergraph(n: int) -> Hypergraph:
    """3-uniform hypergraph whose vertices are the edges of the complete
    graph on n points and whose edges are its triangles; independent sets
    are exactly triangle-free subgraphs."""
    if n < 3:
        raise HypergraphError("triangle hypergraph needs n >= 3")
    pairs = _pair_list(n)
    idx = {p: i for i, p in enumerate(pairs)}
    tris = [
        tuple(sorted((idx[(a, b)], idx[(a, c)], idx[(b, c)])))
        for a, b, c in itertools.combinations(range(n), 3)
    ]
    return Hypergraph(3, len(pairs), tuple(tris))


def symmetric_group_pair_action(n: int) -> PermGroup:
    """The symmetric group on n points acting on the edges of the complete
    graph, generated by a transposition and an n-cycle."""
    pairs = _pair_list(n)
    idx = {p: i for i, p in enumerate(pairs)}

    def act(sigma):
        return tuple(
            idx[tuple(sorted((sigma[a], sigma[b])))] for a, b in pairs
        )

    swap = list(range(n))
    swap[0], swap[1] = 1, 0
    cyc = [(i + 1) % n for i in range(n)]
    return PermGroup(len(pairs), (act(swap), act(cyc)))


def cyclic_group(n: int) -> PermGroup:
    return PermGroup(n, (tuple((i + 1) % n for i in range(n)),))


def dihedral_group(n: int) -> PermGroup:
    rot = tuple((i + 1) % n for i in range(n))
    refl = tuple((-i) % n for i in range(n))
    return PermGroup(n, (rot, refl))


def mantel_pair_orbit_matrices(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Indicator matrices of the three pair orbits (by intersection size
    2, 1, 0) of complete-graph edges; the two-class Johnson scheme."""
    pairs = _pair_list(n)
    nv = len(pairs)
    a0 = np.eye(nv)
    a1 = np.zeros((nv, nv))
    a2 = np.zeros((nv, nv))
    for i, p in enumerate(pairs):
        for j, q in enumerate(pairs):
            if i == j:
                continue
            common = len(set(p) & set(q))
            if common == 1:
                a1[i, j] = 1.0
            else:
                a2[i, j] = 1.0
    return a0, a1, a2


def mantel_theta(n: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact relaxation value of the triangle family: n^2/4.

    The invariant program reduces to two variables: the common entry on
    intersecting pairs (a) and on disjoint pairs (b).  PSD-ness is three
    linear inequalities through the Johnson-scheme eigenvalues

        intersecting class: -2, n-4, 2n-4
        disjoint class:      1, -(n-3), (n-2)(n-3)/2

    and the single link constraint caps a at the link value over twice the
    link size; the link of a base vertex is a perfect matching on 2(n-2)
    points, whose relaxation value n-2 makes that cap exactly 1/2.

    Returns (value, a, b) as exact rationals.
    """
    if n < 4:
        raise HypergraphError("closed-form pipeline needs n >= 4")
    nv = comb(n, 2)
    r1 = nv * 2 * (n - 2)  # ordered pairs sharing one endpoint
    r2 = nv * comb(n - 2, 2)  # ordered disjoint pairs
    link_cap = Fraction(n - 2, 2 * (n - 2))  # = 1/2

    # Variables (a, b, s1, s2, s3); maximize the mean row sum.
    c = [Fraction(r1, nv), Fraction(r2, nv), 0, 0, 0]
    rows = [
        [2, -1, 1, 0, 0],  # 1 - 2a + b >= 0
        [-(n - 4), (n - 3), 0, 1, 0],  # 1 + (n-4)a - (n-3)b >= 0
        [-(2 * n - 4), Fraction(-(n - 2) * (n - 3), 2), 0, 0, 1],  # third class
    ]
    rhs = [1, 1, 1]
    bounds = [(0, link_cap), (None, None), (0, None), (0, None), (0, None)]
    res = solve_lp(c, rows, rhs, bounds, sense="max", exact=True)
    if res.status != "optimal":
        raise HypergraphError(f"two-variable program unexpectedly {res.status}")
    value = Fraction(1) + res.value
    return value, res.x[0], res.x[1]
