import itertools
import random
from fractions import Fraction

import pytest

from hypertheta.hypercore import (
    FormatError,
    Hypergraph,
    HypergraphError,
    InstanceTooLargeError,
    NoColoringError,
    UniformityError,
    alpha,
    chi_star,
    complement,
    complete_hypergraph,
    cycle_graph,
    empty_hypergraph,
    enumerate_cliques,
    format_hypergraph,
    in_clique_polytope,
    induced,
    is_independent,
    link,
    maximal_independent_sets,
    parse_hypergraph,
    parse_weights,
    random_hypergraph,
)
from hypertheta.symmetry import mantel_hypergraph


def brute_alpha(hg, w=None):
    """Oracle: full subset enumeration."""
    w = w or [1] * hg.n
    best = 0
    for k in range(hg.n + 1):
        for s in itertools.combinations(range(hg.n), k):
            if is_independent(hg, s):
                best = max(best, sum(w[v] for v in s))
    return best


def brute_cover_lp(sets, w):
    """Oracle for the fractional cover: enumerate basic solutions of the
    equality-form LP (columns = sets + surplus) in exact arithmetic."""
    n = len(w)
    cols = []
    costs = []
    for s in sets:
        cols.append([Fraction(1) if v in s else Fraction(0) for v in range(n)])
        costs.append(Fraction(1))
    for i in range(n):
        surplus = [Fraction(0)] * n
        surplus[i] = Fraction(-1)
        cols.append(surplus)
        costs.append(Fraction(0))
    best = None
    target = [Fraction(x) for x in w]
    for basis in itertools.combinations(range(len(cols)), n):
        mat = [[cols[j][i] for j in basis] for i in range(n)]
        sol = _solve_exact(mat, target)
        if sol is None or any(v < 0 for v in sol):
            continue
        val = sum(costs[j] * v for j, v in zip(basis, sol))
        if best is None or val < best:
            best = val
    return best


def _solve_exact(mat, rhs):
    n = len(mat)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


class TestConstruction:
    def test_normalizes_edges(self):
        hg = Hypergraph(2, 3, ((2, 0), (0, 2), (1, 0)))
        assert hg.edges == ((0, 1), (0, 2))

    def test_rejects_bad_edges(self):
        with pytest.raises(HypergraphError):
            Hypergraph(2, 3, ((0, 0),))
        with pytest.raises(HypergraphError):
            Hypergraph(2, 3, ((0, 3),))
        with pytest.raises(HypergraphError):
            Hypergraph(0, 3, ())


class TestLink:
    def test_single_edge(self):
        hg = complete_hypergraph(3, 3)
        sub, vmap = link(hg, 0)
        assert (sub.r, sub.n, sub.edges) == (2, 2, ((0, 1),))
        assert vmap == (1, 2)

    def test_mantel_link_is_matching(self):
        hg = mantel_hypergraph(4)
        x = 3  # the vertex standing for the complete-graph edge {1,2}
        sub, vmap = link(hg, x)
        assert sub.n == 4 and sub.m == 2
        degrees = [sum(v in e for e in sub.edges) for v in range(sub.n)]
        assert degrees == [1, 1, 1, 1]

    def test_isolated_vertex(self):
        hg = Hypergraph(3, 4, ((0, 1, 2),))
        sub, vmap = link(hg, 3)
        assert sub.n == 0 and sub.m == 0 and vmap == ()

    def test_r1_rejected(self):
        with pytest.raises(UniformityError):
            link(Hypergraph(1, 2, ((0,),)), 0)

    def test_round_trip(self):
        rng = random.Random(11)
        for _ in range(30):
            hg = random_hypergraph(rng.randint(3, 8), 3, 0.4, rng)
            x = rng.randrange(hg.n)
            sub, vmap = link(hg, x)
            back = {tuple(sorted(vmap[v] for v in e)) for e in sub.edges}
            want = {tuple(sorted(set(e) - {x})) for e in hg.edges if x in e}
            assert back == want


class TestComplement:
    def test_complete_to_empty(self):
        assert complement(complete_hypergraph(3, 3)).m == 0

    def test_empty_graph_to_complete(self):
        assert complement(empty_hypergraph(2, 4)) == complete_hypergraph(2, 4)

    def test_involution(self):
        rng = random.Random(7)
        for _ in range(25):
            hg = random_hypergraph(rng.randint(2, 8), rng.randint(2, 3), 0.5, rng)
            assert complement(complement(hg)) == hg


class TestIndependence:
    def test_small_subset(self):
        hg = complete_hypergraph(3, 3)
        assert is_independent(hg, (0, 1))
        assert not is_independent(hg, (0, 1, 2))

    def test_bipartite_subgraph_in_triangle_family(self):
        hg = mantel_hypergraph(4)
        # complete-graph edges crossing the bipartition {0,1} | {2,3}
        crossing = (1, 2, 3, 4)
        for e in hg.edges:  # oracle: scan all triangles directly
            assert not all(v in crossing for v in e)
        assert is_independent(hg, crossing)

    def test_rejects_bad_subset(self):
        with pytest.raises(HypergraphError):
            is_independent(complete_hypergraph(2, 3), (1, 0))


class TestAlpha:
    def test_complete_uniform(self):
        for r in (2, 3, 4):
            hg = complete_hypergraph(r, r)
            value, witness = alpha(hg)
            assert value == r - 1
            assert is_independent(hg, witness)

    def test_mantel4(self):
        hg = mantel_hypergraph(4)
        value, witness = alpha(hg)
        assert value == brute_alpha(hg) == 4
        assert is_independent(hg, witness)

    def test_cap(self):
        with pytest.raises(InstanceTooLargeError):
            alpha(empty_hypergraph(2, 30))

    def test_weighted_matches_enumeration(self):
        rng = random.Random(23)
        for _ in range(25):
            hg = random_hypergraph(rng.randint(3, 7), 3, 0.4, rng)
            w = [rng.uniform(-1, 2) for _ in range(hg.n)]
            got, witness = alpha(hg, w)
            want = max(
                sum(w[v] for v in s)
                for k in range(hg.n + 1)
                for s in itertools.combinations(range(hg.n), k)
                if is_independent(hg, s)
            )
            assert abs(got - want) < 1e-12
            assert is_independent(hg, witness)

    def test_lower_bound_r_minus_one(self):
        rng = random.Random(5)
        for _ in range(20):
            hg = random_hypergraph(rng.randint(2, 8), 3, 0.6, rng)
            if hg.n >= hg.r - 1:
                assert alpha(hg)[0] >= hg.r - 1


class TestCliques:
    def test_complete(self):
        assert enumerate_cliques(complete_hypergraph(3, 4)) == [(0, 1, 2, 3)]

    def test_empty_3uniform(self):
        got = enumerate_cliques(empty_hypergraph(3, 4))
        assert got == sorted(itertools.combinations(range(4), 2))

    def test_cycle(self):
        assert enumerate_cliques(cycle_graph(5)) == sorted(cycle_graph(5).edges)

    def test_duality_with_complement(self):
        rng = random.Random(13)
        for _ in range(25):
            hg = random_hypergraph(rng.randint(3, 8), 3, 0.4, rng)
            assert set(enumerate_cliques(hg)) == set(
                maximal_independent_sets(complement(hg))
            )


class TestCliquePolytope:
    def test_independent_indicator(self):
        rng = random.Random(3)
        for _ in range(15):
            hg = random_hypergraph(rng.randint(3, 7), 3, 0.4, rng)
            _, witness = alpha(hg)
            f = [1 if v in witness else 0 for v in range(hg.n)]
            assert in_clique_polytope(hg, f)

    def test_clique_indicator_fails(self):
        hg = complete_hypergraph(3, 3)
        assert not in_clique_polytope(hg, [1, 1, 1])

    def test_constant_boundary(self):
        for r in (2, 3, 4):
            hg = complete_hypergraph(r, r)
            f = [Fraction(r - 1, r)] * r
            assert in_clique_polytope(hg, f)


class TestChiStar:
    def test_empty_hypergraph(self):
        value, parts = chi_star(empty_hypergraph(3, 3))
        assert value == 1
        assert parts == [(Fraction(1), (0, 1, 2))]

    def test_cycle5(self):
        value, parts = chi_star(cycle_graph(5))
        sets = maximal_independent_sets(cycle_graph(5))
        assert value == brute_cover_lp(sets, [1] * 5) == Fraction(5, 2)

    def test_triangle(self):
        value, _ = chi_star(complete_hypergraph(2, 3))
        assert value == 3

    def test_one_uniform_with_edge(self):
        with pytest.raises(NoColoringError):
            chi_star(Hypergraph(1, 2, ((0,),)))

    def test_exact_reconstruction(self):
        rng = random.Random(17)
        for _ in range(15):
            hg = random_hypergraph(rng.randint(3, 7), 3, 0.4, rng)
            w = [Fraction(rng.randint(0, 5), rng.randint(1, 4)) for _ in range(hg.n)]
            value, parts = chi_star(hg, w)
            recon = [Fraction(0)] * hg.n
            for lam, vs in parts:
                assert lam > 0
                assert is_independent(hg, vs)
                for v in vs:
                    recon[v] += lam
            assert recon == w
            assert sum((lam for lam, _ in parts), Fraction(0)) == value

    def test_matches_basis_enumeration(self):
        rng = random.Random(29)
        for _ in range(6):
            hg = random_hypergraph(5, 3, 0.5, rng)
            w = [Fraction(rng.randint(0, 3)) for _ in range(5)]
            value, _ = chi_star(hg, w)
            want = brute_cover_lp(maximal_independent_sets(hg), w)
            assert value == want

    def test_rejects_negative(self):
        with pytest.raises(HypergraphError):
            chi_star(cycle_graph(5), [1, 1, -1, 1, 1])

    def test_singleton_support_is_tight(self):
        # one positive vertex: a single independent set priced at its weight
        rng = random.Random(41)
        for _ in range(10):
            hg = random_hypergraph(rng.randint(3, 7), 3, 0.5, rng)
            x = rng.randrange(hg.n)
            c = Fraction(rng.randint(1, 9), rng.randint(1, 4))
            w = [Fraction(0)] * hg.n
            w[x] = c
            value, parts = chi_star(hg, w)
            assert value == c
            assert all(x in vs for _, vs in parts)


class TestInduced:
    def test_edges_restricted(self):
        hg = Hypergraph(3, 5, ((0, 1, 2), (1, 2, 3), (2, 3, 4)))
        sub, vmap = induced(hg, (1, 2, 3))
        assert vmap == (1, 2, 3)
        assert sub.edges == ((0, 1, 2),)


class TestFiles:
    def test_round_trip(self):
        rng = random.Random(1)
        hg = random_hypergraph(7, 3, 0.5, rng)
        assert parse_hypergraph(format_hypergraph(hg)) == hg

    def test_comments_and_blanks(self):
        text = "# triangle\n\n2 3 3\n0 1\n# middle\n0 2\n1 2\n"
        assert parse_hypergraph(text) == complete_hypergraph(2, 3)

    def test_error_reports_line(self):
        with pytest.raises(FormatError) as err:
            parse_hypergraph("2 3 1\n1 0\n")
        assert err.value.line == 2

    def test_header_count_mismatch(self):
        with pytest.raises(FormatError):
            parse_hypergraph("2 3 2\n0 1\n")

    def test_weights(self):
        vals = parse_weights("1\n1/2\n0.25\n", 3)
        assert vals == [1, Fraction(1, 2), Fraction(1, 4)]
        with pytest.raises(FormatError):
            parse_weights("1\nx\n", 2)
        with pytest.raises(FormatError):
            parse_weights("1\n2\n", 3)
