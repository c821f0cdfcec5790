import math
import random
from fractions import Fraction

import numpy as np
import pytest

from hypertheta.hoffman import (
    adjacency_operator,
    format_weighted_hypergraph,
    hoff,
    induced_measure,
    lambda_levels,
    link_measure,
    parse_weighted_hypergraph,
    random_weighted_hypergraph,
    uniform_weighted,
    weighted_hypergraph,
)
from hypertheta.hypercore import (
    HypergraphError,
    alpha,
    complete_hypergraph,
    cycle_graph,
)
from hypertheta.symmetry import mantel_hypergraph
from hypertheta.thetabody import theta


def single_edge():
    return uniform_weighted(complete_hypergraph(3, 3))


class TestMeasures:
    def test_single_edge_vertex_measure(self):
        assert single_edge().vertex_measure() == [Fraction(1, 3)] * 3

    def test_regular_graph_uniform(self):
        wh = uniform_weighted(cycle_graph(5))
        assert wh.vertex_measure() == [Fraction(1, 5)] * 5

    def test_two_edges_weighted(self):
        wh = weighted_hypergraph(
            6, 3, [(0, 1, 2), (3, 4, 5)], [Fraction(3, 4), Fraction(1, 4)]
        )
        assert wh.vertex_measure() == [Fraction(1, 4)] * 3 + [Fraction(1, 12)] * 3

    def test_induced_sums_to_one(self):
        rng = random.Random(5)
        for _ in range(10):
            wh = random_weighted_hypergraph(rng.randint(4, 7), 3, 0.4, rng)
            for i in (1, 2):
                total = sum(induced_measure(wh, i).values())
                assert total == 1

    def test_range_errors(self):
        with pytest.raises(HypergraphError):
            induced_measure(single_edge(), 0)
        with pytest.raises(HypergraphError):
            induced_measure(single_edge(), 3)

    def test_isolated_vertices_dropped(self):
        wh = weighted_hypergraph(5, 3, [(0, 2, 4)], [1])
        assert wh.n == 3 and wh.vertex_map == (0, 2, 4)

    def test_normalization(self):
        wh = weighted_hypergraph(3, 3, [(0, 1, 2)], [7])
        assert wh.mu == (Fraction(1),)


class TestLinks:
    def test_single_edge_vertex_link(self):
        wh = single_edge()
        lk = link_measure(wh, (0,))
        assert lk.r == 2 and lk.mu == (Fraction(1),)
        assert lk.vertex_map == (1, 2)

    def test_triangle_family_pair_link(self):
        wh = uniform_weighted(mantel_hypergraph(4))
        lk = link_measure(wh, (0,))
        assert lk.r == 2 and lk.hyper.m == 2
        assert lk.mu == (Fraction(1, 2), Fraction(1, 2))

    def test_full_edge_rejected(self):
        with pytest.raises(HypergraphError):
            link_measure(single_edge(), (0, 1, 2))

    def test_zero_measure_subset_rejected(self):
        wh = weighted_hypergraph(4, 3, [(0, 1, 2)], [1])
        with pytest.raises(HypergraphError):
            link_measure(wh, (0, 3))


class TestOperator:
    def test_regular_graph_is_scaled_adjacency(self):
        wh = uniform_weighted(cycle_graph(5))
        op = adjacency_operator(wh)
        want = np.zeros((5, 5))
        for i in range(5):
            want[i, (i + 1) % 5] = want[(i + 1) % 5, i] = 0.5
        assert np.abs(op.matrix - want).max() < 1e-12

    def test_single_edge_operator(self):
        op = adjacency_operator(single_edge())
        want = (np.ones((3, 3)) - np.eye(3)) / 2
        assert np.abs(op.matrix - want).max() < 1e-12

    def test_complete_graph(self):
        for n in (4, 6):
            op = adjacency_operator(uniform_weighted(complete_hypergraph(2, n)))
            want = (np.ones((n, n)) - np.eye(n)) / (n - 1)
            assert np.abs(op.matrix - want).max() < 1e-12

    def test_spectral_range_and_top_eigenvector(self):
        rng = random.Random(8)
        for _ in range(12):
            wh = random_weighted_hypergraph(rng.randint(4, 8), 3, 0.4, rng)
            op = adjacency_operator(wh)
            d = np.sqrt(op.vertex_measure)
            sym = d[:, None] * op.matrix / d[None, :]
            vals = np.linalg.eigvalsh(sym)
            assert vals.min() >= -1 - 1e-9
            assert abs(vals.max() - 1.0) < 1e-9
            one = np.ones(wh.n)
            assert np.abs(op.matrix @ one - one).max() < 1e-12
            assert vals.min() < 0  # zero trace forces a negative eigenvalue


class TestLevelsAndBound:
    def test_pentagon_level(self):
        levels = lambda_levels(uniform_weighted(cycle_graph(5)))
        assert len(levels) == 1
        assert abs(levels[0] - math.cos(4 * math.pi / 5)) < 1e-9

    def test_single_edge_levels(self):
        levels = lambda_levels(single_edge())
        assert abs(levels[0] + 0.5) < 1e-12
        assert abs(levels[1] + 1.0) < 1e-12

    def test_complete_graph_level(self):
        for n in (4, 7):
            levels = lambda_levels(uniform_weighted(complete_hypergraph(2, n)))
            assert abs(levels[0] + 1.0 / (n - 1)) < 1e-12

    def test_bound_values(self):
        assert abs(hoff(single_edge()) - 2.0 / 3.0) < 1e-12
        assert abs(hoff(uniform_weighted(cycle_graph(5))) - math.sqrt(5.0) / 5.0) < 1e-12
        for n in (4, 6):
            assert abs(hoff(uniform_weighted(complete_hypergraph(2, n))) - 1.0 / n) < 1e-12

    def test_sandwich(self):
        rng = random.Random(12)
        for _ in range(20):
            wh = random_weighted_hypergraph(rng.randint(4, 8), 3, rng.choice((0.3, 0.5)), rng)
            mu1 = [float(v) for v in wh.vertex_measure()]
            a = alpha(wh.hyper, mu1)[0]
            t = theta(wh.hyper, mu1).value
            h = hoff(wh)
            assert a <= t + 1e-6
            assert t <= h + 1e-6

    def test_alpha_is_weighted_alpha(self):
        rng = random.Random(19)
        for _ in range(10):
            wh = random_weighted_hypergraph(rng.randint(4, 7), 3, 0.4, rng)
            mu1 = wh.vertex_measure()
            direct, _ = alpha(wh.hyper, mu1)
            assert direct == max(
                (sum(mu1[v] for v in s), s)
                for s in _independent_sets(wh.hyper)
            )[0]

    def test_transitive_tightness(self):
        for wh in (single_edge(), uniform_weighted(mantel_hypergraph(4))):
            mu1 = [float(v) for v in wh.vertex_measure()]
            t = theta(wh.hyper, mu1, tol=1e-11).value
            assert abs(t - hoff(wh)) < 1e-6


def _independent_sets(hg):
    import itertools

    from hypertheta.hypercore import is_independent

    for k in range(hg.n + 1):
        for s in itertools.combinations(range(hg.n), k):
            if is_independent(hg, s):
                yield s


class TestFiles:
    def test_round_trip(self):
        wh = weighted_hypergraph(
            4, 3, [(0, 1, 2), (1, 2, 3)], [Fraction(2, 3), Fraction(1, 3)]
        )
        back = parse_weighted_hypergraph(format_weighted_hypergraph(wh))
        assert back.hyper == wh.hyper and back.mu == wh.mu

    def test_bad_line_reported(self):
        from hypertheta.hypercore import FormatError

        with pytest.raises(FormatError) as err:
            parse_weighted_hypergraph("3 4 1\n0 1 2\n")
        assert err.value.line == 2
