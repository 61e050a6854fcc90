import pytest
from hypothesis import given, strategies as st

from coarsekit import (UsageError, check_metric, check_partition, make_grid,
                       make_ternary, neighborhood, separated_partition, ulf_profile)


def brute_neighborhood(w, pts, r):
    return {x for x in w.points if min(w.distance(x, p) for p in pts) <= r}


class TestDistance:
    def test_natural_line(self, n_window):
        assert n_window.distance((3,), (10,)) == 7

    def test_identity(self, zoo):
        for w in zoo.values():
            p = w.points[len(w) // 2]
            assert w.distance(p, p) == 0

    def test_ternary_singleton_supports(self, m_window):
        # values 3 and 9 for supports {1} and {2}
        assert m_window.distance((1,), (2,)) == 6

    def test_mismatched_space_is_usage_error(self, n_window, m_window):
        with pytest.raises(UsageError):
            n_window.distance((3,), (1, 2))
        with pytest.raises(UsageError):
            m_window.distance((-5, 0), (1,))


class TestNeighborhood:
    def test_interval(self):
        w = make_grid(False, 1, 100)
        got = neighborhood(w, [(50,)], 3)
        assert got == {(x,) for x in range(47, 54)}

    def test_radius_zero_is_identity(self, z2_window):
        pts = set(z2_window.points[:4])
        assert neighborhood(z2_window, pts, 0) == pts

    def test_ternary_example(self, m_window):
        # around value 9 (support {2}) radius 3: values 9 and 12
        got = neighborhood(m_window, [(2,)], 3)
        assert got == {(2,), (1, 2)}

    def test_monotone_and_extensive(self, zoo):
        for w in zoo.values():
            a = set(w.points[:3])
            n2 = neighborhood(w, a, 2)
            n5 = neighborhood(w, a, 5)
            assert a <= n2 <= n5
            assert n2 == brute_neighborhood(w, a, 2)

    @given(r=st.integers(0, 6), s=st.integers(0, 6), idx=st.integers(0, 40))
    def test_nested_radii_on_line(self, r, s, idx):
        w = make_grid(True, 1, 25)
        a = {w.points[idx % len(w)]}
        small, big = sorted((r, s))
        assert neighborhood(w, a, small) <= neighborhood(w, a, big)


class TestSeparatedPartition:
    def test_line_r1_two_classes(self, n_window):
        part = separated_partition(n_window, 1)
        assert part.class_count() == 2
        assert not check_partition(n_window, part)

    def test_single_point_window(self):
        w = make_grid(False, 1, 0)
        part = separated_partition(w, 5)
        assert part.class_count() == 1

    def test_plane_r1_at_most_five_classes(self, z2_window):
        part = separated_partition(z2_window, 1)
        assert part.class_count() <= 5
        assert not check_partition(z2_window, part)

    def test_zoo_counts_bounded_by_ball_size(self, zoo):
        for name, w in zoo.items():
            for r in (1, 2, 4):
                part = separated_partition(w, r)
                bound = max(len(w.space.ball(p, r)) for p in w.points)
                assert part.class_count() <= bound, (name, r)
                assert not check_partition(w, part), (name, r)


class TestUlfProfile:
    def test_line_and_plane_and_tree(self, z_window, z2_window, f2_window):
        assert ulf_profile(z_window, 1)[1] == 3
        assert ulf_profile(z2_window, 1)[1] == 5
        assert ulf_profile(f2_window, 1)[1] == 5

    def test_monotone_in_r(self, m_window):
        prof = ulf_profile(m_window, 6)
        vals = [prof[r] for r in range(7)]
        assert vals == sorted(vals)

    def test_interior_values_stable_under_horizon_growth(self):
        small = make_grid(True, 2, 6)
        large = make_grid(True, 2, 12)
        for r in (1, 2, 3):
            assert ulf_profile(small, r)[r] == ulf_profile(large, r)[r]


class TestCheckMetric:
    def test_zoo_windows_pass(self, zoo):
        for name, w in zoo.items():
            rep = check_metric(w, 1000, seed=7)
            assert rep.ok, (name, rep.violations[:3])

    def test_corrupted_oracle_is_caught(self, n_window):
        def bad(a, b):
            if a == (4,) and b == (9,):
                return -1
            return abs(a[0] - b[0])

        rep = check_metric(n_window, 4000, seed=1, oracle=bad)
        assert any(v.kind == "negative" for v in rep.violations)

    def test_asymmetric_oracle_is_caught(self, n_window):
        def bad(a, b):
            d = abs(a[0] - b[0])
            return d + 1 if (a[0] + b[0]) % 7 == 2 and a[0] < b[0] else d

        rep = check_metric(n_window, 4000, seed=2, oracle=bad)
        assert any(v.kind in ("symmetry", "triangle") for v in rep.violations)

    def test_sample_count_validated(self, n_window):
        with pytest.raises(UsageError):
            check_metric(n_window, 0)


class TestWindowContracts:
    def test_window_is_exact_ball(self, zoo):
        # every enumerated point is within the horizon, and every ambient
        # ball point within the horizon is enumerated
        for name, w in zoo.items():
            if w.complete:
                continue
            assert all(w.base_distance(p) <= w.horizon for p in w.points), name
            probe = min(w.horizon, 25)
            ambient = set(w.space.ball(w.basepoint, probe))
            inside = {p for p in w.points if w.base_distance(p) <= probe}
            assert ambient == inside, name

    def test_interior_margins(self, n_window):
        inner = n_window.interior(20)
        assert all(n_window.margin_of(p) >= 20 for p in inner)
        assert len(inner) == len(n_window) - 20

    def test_complete_window_has_no_edge(self, cluster_window):
        assert cluster_window.interior(10 ** 6) == cluster_window.points
