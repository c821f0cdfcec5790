"""Triangle-avoiding sets in the binary cube.

H(n, s) is the 3-uniform hypergraph on the 2^n binary words whose edges are
the triples at pairwise Hamming distance s; such triangles exist iff s is
even and 0 < s <= floor(2n/3).  Its relaxation value has a closed form in
two orthogonal-polynomial minima,

    value(H(n,s))   = 2^n (M_K - theta0 / C(n,s)) / (M_K - 1)
    theta0          = C(n,s) M_Q / (M_Q - 1)

where M_K minimizes the degree-k Krawtchouk values at s and M_Q minimizes
the degree-k Hahn values at s/2.  Both polynomial families are normalized
to 1 at 0 and evaluated in exact rational arithmetic: the binomials
involved overflow doubles around n = 150, well inside the scan range, so
floats appear only in the final logarithm.

The Hahn index range is clipped to k <= min(s, n-s): the evaluation formula
divides by C(n-s, i) and the underlying scheme has only min(s, n-s) + 1
eigenspaces.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .hypercore import Hypergraph, HypergraphError, InstanceTooLargeError
from .numlin import solve_lp

__all__ = [
    "HammingInstanceError",
    "triangles_exist",
    "build_hamming_hypergraph",
    "krawtchouk",
    "hahn",
    "m_k",
    "m_q",
    "theta_hamming_link",
    "theta_hamming",
    "theta_hamming_lp",
    "theta_hamming_link_lp",
    "closest_even",
    "side_for",
    "DecayRow",
    "decay_scan",
    "log_fraction",
]

HAMMING_BUILD_CAP = 14


class HammingInstanceError(HypergraphError):
    """No triangles at these parameters, so the closed forms do not apply."""


def triangles_exist(n: int, s: int) -> bool:
    return s > 0 and s % 2 == 0 and s <= (2 * n) // 3


def build_hamming_hypergraph(n: int, s: int) -> Hypergraph:
    """All s-triangles of the n-cube as 3-edges on vertices 0..2^n-1.

    Words are encoded as integers; distance is the popcount of the xor.
    Emits a warning and an edgeless hypergraph when no triangle can exist.
    """
    if n < 1:
        raise HypergraphError("dimension must be positive")
    if n > HAMMING_BUILD_CAP:
        raise InstanceTooLargeError(f"2^{n} vertices exceeds cap 2^{HAMMING_BUILD_CAP}")
    size = 1 << n
    if not triangles_exist(n, s):
        warnings.warn(
            f"no {s}-triangles in the {n}-cube (need s even, 0 < s <= {2*n//3})",
            stacklevel=2,
        )
        return Hypergraph(3, size, ())
    shifts = [m for m in range(size) if bin(m).count("1") == s]
    edges = []
    for x in range(size):
        around = sorted(x ^ m for m in shifts)
        for y, z in itertools.combinations(around, 2):
            if y > x and z > x and bin(y ^ z).count("1") == s:
                edges.append((x, y, z))
    return Hypergraph(3, size, tuple(edges))


# ---------------------------------------------------------------------------
# Orthogonal polynomial values (exact)
# ---------------------------------------------------------------------------

def krawtchouk(n: int, k: int, t: int) -> Fraction:
    """Degree-k Krawtchouk value at t, normalized to 1 at t = 0."""
    if not (0 <= k <= n and 0 <= t <= n):
        raise HypergraphError(f"krawtchouk out of range: n={n} k={k} t={t}")
    total = sum(
        (-1) ** i * comb(t, i) * comb(n - t, k - i) for i in range(k + 1)
    )
    return Fraction(total, comb(n, k))


def hahn(n: int, s: int, k: int, t: int) -> Fraction:
    """Degree-k Hahn value at t for the weight-s slice, normalized to 1 at 0."""
    if not (0 <= k <= min(s, n - s)):
        raise HypergraphError(f"hahn degree out of range: n={n} s={s} k={k}")
    if not (0 <= t <= s):
        raise HypergraphError(f"hahn argument out of range: t={t}")
    total = Fraction(0)
    for i in range(k + 1):
        term = Fraction(comb(k, i) * comb(n + 1 - k, i) * comb(t, i))
        term /= comb(s, i) * comb(n - s, i)
        total += -term if i % 2 else term
    return total


def m_k(n: int, s: int) -> tuple[Fraction, int]:
    """Minimum Krawtchouk value at s over all degrees, with the smallest
    attaining degree."""
    if not (0 <= s <= n):
        raise HypergraphError(f"m_k out of range: n={n} s={s}")
    best, best_k = None, None
    for k in range(n + 1):
        v = krawtchouk(n, k, s)
        if best is None or v < best:
            best, best_k = v, k
    return best, best_k


def m_q(n: int, s: int) -> tuple[Fraction, int]:
    """Minimum Hahn value at s/2 over the valid degrees, with argmin."""
    if s % 2 != 0 or not (0 <= s <= n):
        raise HypergraphError(f"m_q needs even s in range: n={n} s={s}")
    best, best_k = None, None
    for k in range(min(s, n - s) + 1):
        v = hahn(n, s, k, s // 2)
        if best is None or v < best:
            best, best_k = v, k
    return best, best_k


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _require_instance(n: int, s: int) -> None:
    if not triangles_exist(n, s):
        raise HammingInstanceError(
            f"no {s}-triangles in the {n}-cube (need s even, 0 < s <= {2*n//3})"
        )


def theta_hamming_link(n: int, s: int) -> Fraction:
    """Relaxation value of the base-vertex link: the distance-s graph on the
    weight-s words."""
    _require_instance(n, s)
    mq, _ = m_q(n, s)
    if mq >= 0:
        raise HammingInstanceError("link graph degenerate: no negative Hahn value")
    return comb(n, s) * mq / (mq - 1)


def theta_hamming(n: int, s: int) -> Fraction:
    """Closed-form relaxation value of H(n, s), an exact rational."""
    _require_instance(n, s)
    mk, _ = m_k(n, s)
    link_value = theta_hamming_link(n, s)
    return (1 << n) * (mk - Fraction(link_value, comb(n, s))) / (mk - 1)


def theta_hamming_link_lp(n: int, s: int) -> Fraction:
    """Link value via the rational LP over Hahn coefficients: maximize the
    constant coefficient subject to the values summing to 1 and the
    distance-s combination vanishing."""
    _require_instance(n, s)
    kmax = min(s, n - s)
    q = [hahn(n, s, k, s // 2) for k in range(kmax + 1)]
    c = [Fraction(comb(n, s))] + [Fraction(0)] * kmax
    rows = [[Fraction(1)] * (kmax + 1), q]
    rhs = [Fraction(1), Fraction(0)]
    res = solve_lp(c, rows, rhs, [(0, None)] * (kmax + 1), sense="max", exact=True)
    if res.status != "optimal":
        raise HammingInstanceError(f"link LP {res.status}")
    return res.value


def theta_hamming_lp(n: int, s: int) -> tuple[Fraction, list[Fraction]]:
    """Cube value via the rational LP over Krawtchouk coefficients.

    Maximizes 2^n a_0 over convex coefficient vectors whose distance-s
    combination stays below the link value divided by the slice size; the
    inequality is handled with one surplus column.  Returns the optimum and
    the distance-s combination at the optimum (used to confirm that the
    omitted nonnegativity constraint is slack).
    """
    _require_instance(n, s)
    kvals = [krawtchouk(n, k, s) for k in range(n + 1)]
    bound = Fraction(theta_hamming_link(n, s), comb(n, s))
    nv = n + 2  # a_0..a_n plus slack
    c = [Fraction(1 << n)] + [Fraction(0)] * (nv - 1)
    rows = [
        [Fraction(1)] * (n + 1) + [Fraction(0)],
        list(kvals) + [Fraction(1)],
    ]
    rhs = [Fraction(1), bound]
    res = solve_lp(c, rows, rhs, [(0, None)] * nv, sense="max", exact=True)
    if res.status != "optimal":
        raise HammingInstanceError(f"cube LP {res.status}")
    combo = sum(res.x[k] * kvals[k] for k in range(n + 1))
    return res.value, [res.x[k] for k in range(n + 1)], combo


# ---------------------------------------------------------------------------
# Density decay scan
# ---------------------------------------------------------------------------

def closest_even(x: Fraction) -> int:
    """Even integer nearest to x; ties round toward the smaller even value."""
    lo = 2 * (x // 2)
    hi = lo + 2
    return int(lo) if x - lo <= hi - x else int(hi)


def side_for(n: int, c) -> int:
    """Triangle side for the scan: the even integer closest to n/c."""
    if c <= 1:
        raise HypergraphError("scan ratio must exceed 1")
    return closest_even(Fraction(n, c) if isinstance(c, int) else Fraction(str(c)))


def log_fraction(q: Fraction) -> float:
    """Natural log of a positive rational; exact integer logs keep precision
    for numerators far beyond float range."""
    if q <= 0:
        raise ValueError("log of a nonpositive rational")
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class DecayRow:
    n: int
    c: int
    s: int
    log_density: float


def decay_scan(n_values, c_values) -> list[DecayRow]:
    """Log-density ln(value / 2^n) along s = side_for(n, c), one row per
    (c, n) in that order.  Rows are pure and independent; results are sorted
    deterministically."""
    rows = []
    for c in sorted(c_values):
        for n in sorted(n_values):
            s = side_for(n, c)
            if not triangles_exist(n, s):
                continue
            density = theta_hamming(n, s) / (1 << n)
            rows.append(DecayRow(n, c, s, log_fraction(density)))
    return rows
