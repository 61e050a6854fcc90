import itertools
import json

import pytest
from hypothesis import given, strategies as st

from coarsekit import (UsageError, check_metric, make_cluster_space,
                       make_coarse_union, make_free_group, make_grid,
                       make_paired_columns, make_square_tuples, make_ternary,
                       window_from_spec)
from coarsekit.zoo import FinitePatternSpace, dyadic_valuation


def bfs_distances(w, source):
    """Shortest paths in the unit-step graph of the window."""
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in w.neighbors(u, 1):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


class TestGrid:
    def test_ray_window(self):
        w = make_grid(False, 1, 10)
        assert [p[0] for p in w.points] == list(range(11))

    def test_plane_unit_ball(self):
        assert len(make_grid(True, 2, 1)) == 5

    def test_quarter_plane_ball(self):
        w = make_grid(False, 2, 2)
        assert set(w.points) == {(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)}

    def test_zero_dims_rejected(self):
        with pytest.raises(UsageError):
            make_grid(False, 0, 5)


class TestFreeGroup:
    def test_ball_sizes(self):
        assert len(make_free_group(2, 0)) == 1
        assert len(make_free_group(2, 1)) == 5
        # 2 * 3^r - 1 elements in the radius-r ball of the rank-2 group
        assert len(make_free_group(2, 2)) == 17
        assert len(make_free_group(2, 4)) == 2 * 3 ** 4 - 1

    def test_reduction_distance_matches_bfs(self):
        w = make_free_group(2, 5)
        dist = bfs_distances(w, ())
        for u in w.points:
            assert dist[u] == w.base_distance(u)
        # spot-check a thousand pairs exactly, via per-source BFS
        sources = w.points[:12]
        for s in sources:
            d = bfs_distances(w, s)
            for t in w.points[:90]:
                assert d[t] == w.distance(s, t)


class TestTernary:
    def test_metric_formula_examples(self):
        w = make_ternary(4)
        assert w.distance((1,), (1, 2)) == 9      # |3 - 12|
        assert w.distance((1,), (2,)) == 6        # |3 - 9|

    def test_oracle_matches_independent_reevaluation(self, m_window):
        import random
        rng = random.Random(5)
        for _ in range(200):
            a, b = rng.choice(m_window.points), rng.choice(m_window.points)
            expect = abs(sum(3 ** i for i in a) - sum(3 ** i for i in b))
            assert m_window.distance(a, b) == expect

    def test_window_is_every_support(self, m_window):
        assert len(m_window) == 2 ** 7
        assert m_window.basepoint == ()

    def test_values_have_no_forbidden_digits(self, m_window):
        for p in m_window.points:
            v = sum(3 ** i for i in p)
            while v:
                v, d = divmod(v, 3)
                assert d in (0, 1)


class TestSquareTuples:
    def test_pair_distances(self, m2_window):
        assert m2_window.distance((1, 4), (1, 9)) == 5

    def test_membership_and_enumerator_agree(self, m2_window):
        space = m2_window.space
        assert all(space.is_point(p) for p in m2_window.points)
        # brute-force enumeration of qualifying pairs within the horizon
        base = m2_window.basepoint
        brute = set()
        for n1 in range(1, 100):
            for n2 in range(n1 + 1, 100):
                p = (n1 * n1, n2 * n2)
                if space.distance(base, p) <= m2_window.horizon:
                    brute.add(p)
        assert brute == set(m2_window.points)

    def test_strata_window_is_isometric_into_grid(self, m2_window):
        grid = make_grid(False, 2, 1).space
        for a, b in itertools.islice(itertools.combinations(m2_window.points, 2), 500):
            assert m2_window.distance(a, b) == grid.distance(a, b)


class TestPairedColumns:
    def test_column_partners(self):
        w = make_paired_columns(200)
        # k = 2 sits in the second dyadic class: partner column offset 1
        assert (1, 4) in w and (2, 4) in w
        assert w.distance((1, 4), (2, 4)) == 1
        # k odd: the pair is degenerate, only (1, k^2) exists
        assert (1, 9) in w and (2, 9) not in w

    def test_dyadic_classes(self):
        assert [dyadic_valuation(k) for k in (1, 2, 3, 4, 6, 8, 12)] == [0, 1, 0, 2, 1, 3, 2]

    def test_every_column_has_at_most_two_points(self, m32_window):
        by_col = {}
        for (col, sq) in m32_window.points:
            by_col.setdefault(sq, []).append(col)
        for sq, cols in by_col.items():
            assert 1 <= len(cols) <= 2
            assert 1 in cols


class TestClusters:
    def test_six_points_with_unit_pairs(self):
        w = make_cluster_space([[0, 1], [1, 0]], lambda n: n, 3)
        assert len(w) == 6
        for n in (1, 2, 3):
            assert w.distance((n, 0), (n, 1)) == 1

    def test_cross_cluster_distance_is_spoke_sum(self):
        w = make_cluster_space([[0, 1], [1, 0]], lambda n: n, 3)
        for n, m in itertools.combinations((1, 2, 3), 2):
            assert w.distance((n, 0), (m, 0)) == n + m
            assert w.distance((n, 0), (m, 0)) >= min(n, m)

    def test_full_matrix_is_a_metric(self):
        w = make_cluster_space([[0, 1], [1, 0]], lambda n: 2 * n, 3)
        pts = w.points
        for x, y, z in itertools.product(pts, repeat=3):
            assert w.distance(x, z) <= w.distance(x, y) + w.distance(y, z)

    def test_pattern_matrix_validated(self):
        with pytest.raises(UsageError):
            FinitePatternSpace([[0, 5], [5, 1]])
        with pytest.raises(UsageError):
            FinitePatternSpace([[0, 1, 9], [1, 0, 1], [9, 1, 0]])


class TestCoarseUnion:
    def make(self):
        comps = [make_grid(False, 1, 20), make_grid(True, 1, 12), make_grid(False, 2, 4)]
        return make_coarse_union(comps, lambda n: n)

    def test_hub_distance(self):
        w = self.make()
        assert w.distance((1, 0), (2, 0)) == 3    # f(1) + f(2)

    def test_within_component_distances_unchanged(self):
        w = self.make()
        assert w.distance((1, 3), (1, 17)) == 14
        assert w.distance((2, -5), (2, 12)) == 17

    def test_component_separation_exact(self):
        w = self.make()
        spokes = w.space.spokes
        for n, m in itertools.combinations((1, 2, 3), 2):
            best = min(w.distance(x, y) for x in w.points if x[0] == n
                       for y in w.points if y[0] == m)
            assert best == spokes[n - 1] + spokes[m - 1]

    def test_triangle_inequality_exhaustive(self):
        comps = [make_grid(False, 1, 8), make_grid(True, 1, 5), make_grid(False, 2, 3)]
        w = make_coarse_union(comps, lambda n: n)
        pts = w.points
        assert len(pts) == (9 + 11 + 10)
        for x, y, z in itertools.product(pts, repeat=3):
            assert w.distance(x, z) <= w.distance(x, y) + w.distance(y, z)

    def test_metric_samples(self):
        rep = check_metric(self.make(), 2000, seed=3)
        assert rep.ok

    def test_spokes_must_increase(self):
        with pytest.raises(UsageError):
            make_coarse_union([make_grid(False, 1, 3)] * 2, [2, 2])


class TestSpecRoundTrip:
    @pytest.mark.parametrize("name", ["n", "z", "z2", "f2", "m", "m1", "m2",
                                      "m32", "clusters", "union"])
    def test_bundled_specs_build(self, name):
        with open(f"specs/{name}.json", "r", encoding="utf-8") as fh:
            spec = json.load(fh)
        w = window_from_spec(spec)
        assert len(w) > 0
        fp = w.fingerprint()
        assert fp["kind"] == spec["kind"]

    def test_unknown_kind_rejected(self):
        with pytest.raises(UsageError):
            window_from_spec({"kind": "banach"})

    def test_missing_field_named(self):
        with pytest.raises(UsageError, match="horizon"):
            window_from_spec({"kind": "grid", "signed": True, "dims": 2})


@given(st.integers(1, 3), st.integers(0, 30))
def test_ambient_balls_are_exact_on_the_ray(dims_unused, center):
    w = make_grid(False, 1, 40)
    got = sorted(w.space.ball((center,), 4))
    expect = sorted((v,) for v in range(max(0, center - 4), center + 5))
    assert got == expect
