"""Recursive PSD relaxation of the independent-set polytope.

The relaxation body of an r-uniform hypergraph is defined recursively: a
vector f belongs to it when some matrix F with diagonal f has a positive
semidefinite bordered extension and, for every vertex x with a nonempty
link, the row of F restricted to the link lies in F(x,x) times the body of
the link.  At r = 1 the body is the independent-set polytope itself, a box
over the non-edge vertices.

The scaled memberships are flattened into one block SDP: each recursion
node owns a bordered block whose corner carries the scaling.  For t > 0,
g in t * body(K) holds iff some G with diagonal g makes [[t, g'], [g, G]]
positive semidefinite with the rows of G recursively constrained (divide by
t); for t = 0 the block forces g = 0, matching closedness of the body.
Graph nodes need no child blocks: the link of a vertex in a graph is a
1-uniform hypergraph all of whose vertices are edges, so its body is {0}
and the row constraint collapses to zero entries on graph edges.

All assemblies here are pure; solves are delegated to numlin and are
single-threaded per call, so concurrent independent calls are safe.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .hypercore import (
    Hypergraph,
    HypergraphError,
    UniformityError,
    check_weights,
    complement,
    induced,
    link,
)
from .numlin import SdpProblem, SdpSolution, solve_sdp

__all__ = [
    "ThetaCertificate",
    "ThetaResult",
    "DualResult",
    "ThetaSolverError",
    "assemble_theta_sdp",
    "theta",
    "theta_membership",
    "theta_dual",
    "antiblocker_probe",
    "check_certificate",
    "certificate_to_json",
    "certificate_from_json",
]

MEMBERSHIP_TOL = 1e-7


class ThetaSolverError(RuntimeError):
    """The interior-point solve did not reach its tolerance."""

    def __init__(self, message: str, solution: SdpSolution | None = None):
        super().__init__(message)
        self.solution = solution


@dataclass(frozen=True)
class ThetaCertificate:
    """Witness tree for membership of a vector in the relaxation body.

    Each node carries its scaling (the bordered corner), the matrix over the
    node's vertex set, the node uniformity, the map from local vertex labels
    to the parent's labels, and child certificates indexed by local vertex.
    """

    scale: float
    matrix: np.ndarray
    uniformity: int
    vertex_map: tuple
    children: dict = field(default_factory=dict)

    @property
    def vector(self) -> np.ndarray:
        return np.diag(self.matrix).copy()


@dataclass(frozen=True)
class ThetaResult:
    value: float
    optimizer: np.ndarray
    certificate: ThetaCertificate
    diagnostics: dict


@dataclass(frozen=True)
class DualResult:
    value: float
    lam: float
    matrix: np.ndarray
    certificate_children: dict
    diagnostics: dict


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

class _Builder:
    """Accumulates PSD blocks and sparse symmetric equality rows."""

    def __init__(self):
        self.dims: list[int] = []
        self.cons: list[tuple[list, float]] = []

    def block(self, dim: int) -> int:
        self.dims.append(dim)
        return len(self.dims) - 1

    def add(self, entries: list[tuple[int, int, int, float]], rhs: float) -> None:
        """entries: (block, i, j, coefficient) acting on the unordered entry."""
        self.cons.append((entries, rhs))

    def problem(self, objective: dict[int, np.ndarray]) -> SdpProblem:
        obj = []
        for b, d in enumerate(self.dims):
            obj.append(objective.get(b, np.zeros((d, d))))
        cons = []
        for entries, rhs in self.cons:
            mats: dict[int, np.ndarray] = {}
            for b, i, j, v in entries:
                mat = mats.setdefault(b, np.zeros((self.dims[b], self.dims[b])))
                if i == j:
                    mat[i, i] += v
                else:
                    mat[i, j] += v / 2.0
                    mat[j, i] += v / 2.0
            cons.append((mats, rhs))
        return SdpProblem(self.dims, obj, cons)


@dataclass
class _Node:
    hyper: Hypergraph
    blk: int
    vmap: tuple
    children: dict


def _membership_node(builder: _Builder, hg: Hypergraph, vmap: tuple) -> _Node:
    """Bordered block for one recursion node with all its internal ties."""
    assert hg.r >= 2
    blk = builder.block(hg.n + 1)
    for i in range(hg.n):
        builder.add([(blk, 0, i + 1, 1.0), (blk, i + 1, i + 1, -1.0)], 0.0)
    children: dict[int, _Node] = {}
    if hg.r == 2:
        for u, v in hg.edges:
            builder.add([(blk, u + 1, v + 1, 1.0)], 0.0)
    else:
        for x in range(hg.n):
            sub, submap = link(hg, x)
            if sub.n == 0:
                continue  # empty link: no constraint on this row
            child = _membership_node(builder, sub, submap)
            builder.add(
                [(child.blk, 0, 0, 1.0), (blk, x + 1, x + 1, -1.0)], 0.0
            )
            for j, v in enumerate(submap):
                builder.add(
                    [(child.blk, j + 1, j + 1, 1.0), (blk, x + 1, v + 1, -1.0)],
                    0.0,
                )
            children[x] = child
    return _Node(hg, blk, vmap, children)


def assemble_theta_sdp(hg: Hypergraph, w=None) -> tuple[SdpProblem, "_Node"]:
    """Assemble the block SDP whose optimum is the relaxation value for w.

    Requires uniformity at least 2; 1-uniform instances are evaluated
    exactly by theta() without an SDP.
    """
    if hg.r < 2:
        raise UniformityError(
            "1-uniform relaxation is the independence polytope; use theta()"
        )
    wv = [float(v) for v in check_weights(hg, w)]
    builder = _Builder()
    root = _membership_node(builder, hg, tuple(range(hg.n)))
    builder.add([(root.blk, 0, 0, 1.0)], 1.0)
    cobj = np.zeros((hg.n + 1, hg.n + 1))
    for x in range(hg.n):
        cobj[x + 1, x + 1] = wv[x]
    return builder.problem({root.blk: cobj}), root


def _extract(node: _Node, blocks) -> ThetaCertificate:
    mat = np.array(blocks[node.blk])
    return ThetaCertificate(
        scale=float(mat[0, 0]),
        matrix=mat[1:, 1:].copy(),
        uniformity=node.hyper.r,
        vertex_map=tuple(node.vmap),
        children={
            x: _extract(child, blocks) for x, child in node.children.items()
        },
    )


def _solved(problem: SdpProblem, tol: float, what: str) -> SdpSolution:
    sol = solve_sdp(problem, tol=tol)
    if sol.status != "optimal":
        raise ThetaSolverError(
            f"{what}: solver status {sol.status} after {sol.iterations} iterations "
            f"(residuals {sol.residuals})",
            sol,
        )
    return sol


# ---------------------------------------------------------------------------
# The relaxation value
# ---------------------------------------------------------------------------

def theta(hg: Hypergraph, w=None, tol: float = 1e-8) -> ThetaResult:
    """Maximum of w'f over the relaxation body, with optimizer and witness.

    Negative weight entries cost nothing: the body is of antiblocking type,
    so the optimum automatically matches the one for the positive part.
    """
    wv = check_weights(hg, w)
    if hg.r == 1:
        blocked = {e[0] for e in hg.edges}
        f = np.array(
            [1.0 if (x not in blocked and wv[x] > 0) else 0.0 for x in range(hg.n)]
        )
        value = float(sum(float(wv[x]) for x in range(hg.n) if f[x] > 0))
        cert = ThetaCertificate(
            scale=1.0,
            matrix=np.diag(f),
            uniformity=1,
            vertex_map=tuple(range(hg.n)),
        )
        return ThetaResult(value, f, cert, {"mode": "exact-base"})
    problem, root = assemble_theta_sdp(hg, wv)
    sol = _solved(problem, tol, "theta")
    cert = _extract(root, sol.blocks)
    f = cert.vector
    return ThetaResult(
        float(sol.primal),
        f,
        cert,
        {
            "mode": "sdp",
            "iterations": sol.iterations,
            "gap": sol.gap,
            "residuals": sol.residuals,
            "dual": sol.dual,
        },
    )


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

def theta_membership(
    hg: Hypergraph, f, tol: float = MEMBERSHIP_TOL
) -> tuple[bool, ThetaCertificate | None]:
    """Test f in the relaxation body, with a witness tree when it holds.

    Implemented as the largest scaling t with t*f in the body (the body is
    of antiblocking type, so that set is an interval [0, t*]); f belongs iff
    t* >= 1 - tol.  Points within tol of the boundary may flip either way.
    The instance is first restricted to the support of f, which keeps the
    scaled program strictly feasible.
    """
    fv = [float(v) for v in check_weights(hg, f)]
    if any(v < -1e-12 for v in fv):
        return False, None
    if any(v > 1.0 + tol for v in fv):
        return False, None
    support = [x for x in range(hg.n) if fv[x] > 0]
    if not support:
        cert = ThetaCertificate(
            scale=1.0,
            matrix=np.zeros((hg.n, hg.n)),
            uniformity=hg.r,
            vertex_map=tuple(range(hg.n)),
        )
        return True, cert
    sub, smap = induced(hg, support)
    fsub = [fv[v] for v in smap]

    if sub.r == 1:
        blocked = {e[0] for e in sub.edges}
        ok = all(
            (j not in blocked) and fsub[j] <= 1.0 + tol for j in range(sub.n)
        )
        if not ok:
            return False, None
        cert = ThetaCertificate(
            scale=1.0,
            matrix=np.diag(np.array(fsub)),
            uniformity=1,
            vertex_map=smap,
        )
        return True, cert

    builder = _Builder()
    root = _membership_node(builder, sub, smap)
    builder.add([(root.blk, 0, 0, 1.0)], 1.0)
    scale_blk = builder.block(1)
    for j in range(sub.n):
        builder.add(
            [(root.blk, j + 1, j + 1, 1.0), (scale_blk, 0, 0, -fsub[j])], 0.0
        )
    problem = builder.problem({scale_blk: np.array([[1.0]])})
    sol = _solved(problem, min(tol * 1e-2, 1e-8), "theta_membership")
    t_max = float(sol.primal)
    member = t_max >= 1.0 - tol
    if not member:
        return False, None
    return True, _extract(root, sol.blocks)


# ---------------------------------------------------------------------------
# The bordered minimization program
# ---------------------------------------------------------------------------

def theta_dual(hg: Hypergraph, w, tol: float = 1e-8) -> DualResult:
    """Minimum corner value of a bordered PSD matrix with diagonal w whose
    rows lie in the scaled bodies of the complement links.

    Defined for uniformity at least 2 and nonnegative weights; w = 0 gives 0
    immediately.  The support restriction mirrors theta_membership.
    """
    if hg.r < 2:
        raise UniformityError("the bordered program needs uniformity at least 2")
    wv = [float(v) for v in check_weights(hg, w)]
    if any(v < 0 for v in wv):
        raise HypergraphError("theta_dual requires nonnegative weights")
    support = [x for x in range(hg.n) if wv[x] > 0]
    if not support:
        return DualResult(0.0, 0.0, np.zeros((hg.n, hg.n)), {}, {"mode": "zero"})
    sub, smap = induced(hg, support)
    wsub = [wv[v] for v in smap]

    builder = _Builder()
    blk = builder.block(sub.n + 1)
    for j in range(sub.n):
        builder.add([(blk, 0, j + 1, 1.0)], wsub[j])
        builder.add([(blk, j + 1, j + 1, 1.0)], wsub[j])
    cbar = complement(sub)
    children: dict[int, _Node] = {}
    for x in range(sub.n):
        lk, lmap = link(cbar, x)
        if lk.n == 0:
            continue
        if lk.r == 1:
            # 1-uniform complement link: every vertex is an edge, body {0}.
            for v in lmap:
                builder.add([(blk, x + 1, v + 1, 1.0)], 0.0)
            continue
        child = _membership_node(builder, lk, lmap)
        builder.add([(child.blk, 0, 0, 1.0), (blk, x + 1, x + 1, -1.0)], 0.0)
        for j, v in enumerate(lmap):
            builder.add(
                [(child.blk, j + 1, j + 1, 1.0), (blk, x + 1, v + 1, -1.0)], 0.0
            )
        children[x] = child
    # Cap the corner so the feasible region is compact; never binding, since
    # the optimum is at most the total weight (cover by singletons).
    cap_blk = builder.block(1)
    builder.add([(blk, 0, 0, 1.0), (cap_blk, 0, 0, 1.0)], float(sum(wsub)) + 1.0)
    cobj = np.zeros((sub.n + 1, sub.n + 1))
    cobj[0, 0] = -1.0
    problem = builder.problem({blk: cobj})
    sol = _solved(problem, tol, "theta_dual")
    big = np.array(sol.blocks[blk])
    lam = float(big[0, 0])
    zfull = np.zeros((hg.n, hg.n))
    idx = np.array(smap)
    zfull[np.ix_(idx, idx)] = big[1:, 1:]
    cert_children = {
        smap[x]: _extract(child, sol.blocks) for x, child in children.items()
    }
    return DualResult(
        lam,
        lam,
        zfull,
        cert_children,
        {
            "mode": "sdp",
            "iterations": sol.iterations,
            "residuals": sol.residuals,
        },
    )


def antiblocker_probe(hg: Hypergraph, f, g) -> float:
    """Inner product of two candidate vectors; at most 1 whenever f is in
    the body of the hypergraph and g is in the polar-style body of the
    complement."""
    fv = check_weights(hg, f)
    gv = check_weights(hg, g)
    return float(sum(float(a) * float(b) for a, b in zip(fv, gv)))


# ---------------------------------------------------------------------------
# Certificate validation and serialization
# ---------------------------------------------------------------------------

def check_certificate(
    hg: Hypergraph, cert: ThetaCertificate, tol: float = 1e-6, root_scale=1.0
) -> list[str]:
    """Structural audit of a witness tree; returns a list of violations.

    Checks, per node: the bordered matrix is PSD to -tol; child scalings
    match the parent diagonal; child diagonals match the parent row on the
    link; graph nodes vanish on edges; base nodes sit in the scaled box.

    The root vertex_map names the vertices the witness covers; a proper
    subset means the witnessed vector is zero elsewhere and the tree is
    audited against the induced instance.
    """
    problems: list[str] = []
    if tuple(cert.vertex_map) != tuple(range(hg.n)):
        hg, smap = induced(hg, cert.vertex_map)
        if smap != tuple(cert.vertex_map):
            return [f"root vertex map {cert.vertex_map} is not a vertex subset"]

    def visit(node_hg: Hypergraph, cert: ThetaCertificate, label: str):
        mat = np.asarray(cert.matrix, dtype=float)
        if mat.shape != (node_hg.n, node_hg.n):
            problems.append(f"{label}: matrix shape {mat.shape} != n {node_hg.n}")
            return
        diag = np.diag(mat)
        bordered = np.zeros((node_hg.n + 1, node_hg.n + 1))
        bordered[0, 0] = cert.scale
        bordered[0, 1:] = diag
        bordered[1:, 0] = diag
        bordered[1:, 1:] = mat
        if node_hg.n and np.linalg.eigvalsh(bordered).min() < -tol:
            problems.append(f"{label}: bordered matrix not PSD within {tol}")
        if cert.uniformity != node_hg.r:
            problems.append(f"{label}: uniformity {cert.uniformity} != {node_hg.r}")
        if node_hg.r == 1:
            blocked = {e[0] for e in node_hg.edges}
            for x in range(node_hg.n):
                hi = cert.scale + tol
                bad = diag[x] < -tol or diag[x] > hi or (
                    x in blocked and abs(diag[x]) > tol
                )
                if bad:
                    problems.append(f"{label}: base box violated at {x}")
            return
        if node_hg.r == 2:
            for u, v in node_hg.edges:
                if abs(mat[u, v]) > tol:
                    problems.append(f"{label}: edge entry ({u},{v}) nonzero")
            return
        for x in range(node_hg.n):
            sub, submap = link(node_hg, x)
            if sub.n == 0:
                continue
            child = cert.children.get(x)
            if child is None:
                problems.append(f"{label}: missing child at vertex {x}")
                continue
            if tuple(child.vertex_map) != tuple(submap):
                problems.append(f"{label}: child {x} has wrong vertex map")
                continue
            if abs(child.scale - mat[x, x]) > tol:
                problems.append(f"{label}: child {x} scaling mismatch")
            cd = np.diag(np.asarray(child.matrix, dtype=float))
            for j, v in enumerate(submap):
                if abs(cd[j] - mat[x, v]) > tol:
                    problems.append(f"{label}: child {x} diagonal mismatch at {j}")
                    break
            visit(sub, child, f"{label}.{x}")

    if abs(cert.scale - float(root_scale)) > tol:
        problems.append(f"root scaling {cert.scale} != {root_scale}")
    visit(hg, cert, "root")
    return problems


def certificate_to_json(cert: ThetaCertificate) -> str:
    def conv(c: ThetaCertificate) -> dict:
        return {
            "scale": c.scale,
            "uniformity": c.uniformity,
            "vertex_map": list(c.vertex_map),
            "matrix": [[float(v) for v in row] for row in np.asarray(c.matrix)],
            "children": {str(k): conv(v) for k, v in sorted(c.children.items())},
        }

    return json.dumps(conv(cert))


def certificate_from_json(text: str) -> ThetaCertificate:
    def conv(d: dict) -> ThetaCertificate:
        return ThetaCertificate(
            scale=float(d["scale"]),
            matrix=np.array(d["matrix"], dtype=float)
            if d["matrix"]
            else np.zeros((0, 0)),
            uniformity=int(d["uniformity"]),
            vertex_map=tuple(d["vertex_map"]),
            children={int(k): conv(v) for k, v in d["children"].items()},
        )

    return conv(json.loads(text))
