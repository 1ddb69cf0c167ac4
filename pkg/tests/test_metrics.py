import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from polarlab.errors import (
    IsolatedNodeError,
    ParameterError,
    UndefinedMetricError,
    UnknownMetricError,
)
from polarlab.metrics import (
    MetricSeries,
    ProfileMatrix,
    alignment_reached,
    alignment_report,
    bimodality,
    evaluate_group_metric,
    is_group_based,
    local_agreement,
    profile_histogram,
    profile_matrix,
    save_metric_series,
    sign_of_deviation,
    variance,
)

from conftest import (
    cycle_graph,
    graph_from_edges,
    naive_local_agreement,
    path_graph,
    random_connected_graph,
)

A_INTRO = np.array([-1.0, -0.6, -0.2, 0.2, 0.6, 1.0])
B_INTRO = np.array([0.5, 0.5, 0.5, -0.5, -0.5, -0.5])


class TestVariance:
    def test_intro_vectors(self):
        assert abs(variance(A_INTRO) - 2.8) <= 1e-12
        assert abs(variance(B_INTRO) - 1.5) <= 1e-12

    def test_constant_is_zero(self):
        assert variance(np.full(7, 3.3)) == pytest.approx(0.0, abs=1e-25)

    def test_scale_noninvariance(self):
        z = np.array([1.0, 2.0, 5.0])
        assert variance(2 * z) == pytest.approx(4 * variance(z), rel=1e-12)


class TestSignOfDeviation:
    def test_zero_deviation_maps_positive(self):
        # mean is 2, so the middle deviation is exactly 0 and maps to +1
        assert list(sign_of_deviation(np.array([1.0, 2.0, 3.0]))) == [-1, 1, 1]

    def test_constant_all_positive(self):
        assert list(sign_of_deviation(np.array([5.0, 5.0]))) == [1, 1]

    def test_two_sides(self):
        assert list(sign_of_deviation(np.array([-1.0, 1.0]))) == [-1, 1]


class TestBimodality:
    def test_intro_vectors(self):
        assert bimodality(A_INTRO) == pytest.approx(0.58, abs=0.005)
        assert abs(bimodality(B_INTRO) - 1.0) <= 1e-12

    def test_standard_normal_near_one_third(self):
        z = np.random.default_rng(123).standard_normal(100_000)
        assert bimodality(z) == pytest.approx(1 / 3, abs=0.02)

    def test_constant_undefined(self):
        with pytest.raises(UndefinedMetricError):
            bimodality(np.full(5, 2.0))

    def test_needs_two_values(self):
        with pytest.raises(UndefinedMetricError):
            bimodality(np.array([1.0]))

    @given(seed=st.integers(0, 2**31 - 1), n=st.integers(2, 200))
    @settings(max_examples=60, deadline=None)
    def test_bounds(self, seed, n):
        z = np.random.default_rng(seed).standard_normal(n)
        assume(not np.all(z == z[0]))
        b = bimodality(z)
        assert 0.0 < b <= 1.0 + 1e-12


class TestLocalAgreement:
    def test_single_edge_disagreement(self):
        g = graph_from_edges(2, [(0, 1)])
        assert local_agreement(g, np.array([1.0, -1.0])) == 0.0

    def test_path4_hand_count(self):
        g = path_graph(4)
        z = np.array([1.0, 1.0, -1.0, -1.0])
        assert local_agreement(g, z) == pytest.approx(0.75)

    def test_cycle4_half(self):
        g = cycle_graph(4)
        z = np.array([1.0, 1.0, -1.0, -1.0])
        assert local_agreement(g, z) == pytest.approx(0.5)

    def test_isolated_node_rejected(self):
        g = graph_from_edges(3, [(0, 1)])
        with pytest.raises(IsolatedNodeError):
            local_agreement(g, np.zeros(3))

    @given(seed=st.integers(0, 2**31 - 1), n=st.integers(2, 30),
           weighted=st.booleans())
    @settings(max_examples=40, deadline=None)
    def test_matches_naive_double_loop(self, seed, n, weighted):
        rng = np.random.default_rng(seed)
        g = random_connected_graph(rng, n, extra=n, weighted=weighted)
        z = rng.standard_normal(n)
        assert local_agreement(g, z) == pytest.approx(
            naive_local_agreement(g, z), abs=1e-12
        )

    @given(seed=st.integers(0, 2**31 - 1))
    @settings(max_examples=30, deadline=None)
    def test_bounded(self, seed):
        rng = np.random.default_rng(seed)
        g = random_connected_graph(rng, 15, extra=8)
        z = rng.standard_normal(15)
        assert 0.0 <= local_agreement(g, z) <= 1.0

    def test_random_opinions_average_half(self):
        g = random_connected_graph(np.random.default_rng(7), 60, extra=120)
        rng = np.random.default_rng(99)
        vals = [local_agreement(g, rng.standard_normal(60)) for _ in range(120)]
        assert np.mean(vals) == pytest.approx(0.5, abs=0.05)


class TestProfiles:
    def test_single_issue(self):
        pm = profile_matrix([np.array([1.0, -1.0])])
        assert pm.S.tolist() == [[1], [-1]]

    def test_two_issues_opposite_rows(self):
        pm = profile_matrix([np.array([1.0, -1.0]), np.array([-1.0, 1.0])])
        assert pm.S.tolist() == [[1, -1], [-1, 1]]
        assert alignment_reached(pm)

    def test_length_mismatch(self):
        with pytest.raises(ParameterError):
            profile_matrix([np.array([1.0, -1.0]), np.array([1.0, -1.0, 0.0])])

    def test_histogram_all_keys_present(self):
        pm = ProfileMatrix(S=np.ones((4, 2), dtype=np.int8))
        hist = profile_histogram(pm)
        assert hist == {"++": 4, "+-": 0, "-+": 0, "--": 0}
        assert list(hist) == ["++", "+-", "-+", "--"]  # stable key order

    def test_histogram_counts_sum_to_n(self, rng):
        zs = [rng.standard_normal(50) for _ in range(4)]
        hist = profile_histogram(profile_matrix(zs))
        assert sum(hist.values()) == 50
        assert len(hist) == 16

    def test_histogram_roughly_uniform_at_random_start(self):
        rng = np.random.default_rng(0)
        zs = [rng.standard_normal(20000) for _ in range(4)]
        hist = profile_histogram(profile_matrix(zs))
        counts = np.array(list(hist.values()))
        assert counts.min() > 0.7 * 20000 / 16
        assert counts.max() < 1.3 * 20000 / 16

    def test_histogram_issue_cap(self):
        pm = ProfileMatrix(S=np.ones((2, 21), dtype=np.int8))
        with pytest.raises(ParameterError):
            profile_histogram(pm)

    def test_alignment_cases(self):
        aligned = ProfileMatrix(S=np.array([[1, 1], [-1, -1], [1, 1]], dtype=np.int8))
        assert alignment_reached(aligned)
        not_opposite = ProfileMatrix(S=np.array([[1, 1], [1, -1]], dtype=np.int8))
        assert not alignment_reached(not_opposite)
        single = ProfileMatrix(S=np.ones((3, 2), dtype=np.int8))
        rep = alignment_report(single)
        assert rep.aligned and rep.single_profile and rep.unique_rows == 1
        three = ProfileMatrix(
            S=np.array([[1, 1], [-1, -1], [1, -1]], dtype=np.int8)
        )
        assert not alignment_reached(three)


class TestDispatch:
    def test_bimodality_by_id(self):
        assert evaluate_group_metric("bimodality", None, B_INTRO) == pytest.approx(1.0)

    def test_local_agreement_by_id(self):
        g = graph_from_edges(2, [(0, 1)])
        assert evaluate_group_metric("local_agreement", g, np.array([1.0, -1.0])) == 0.0

    def test_scale_invariance_through_dispatch(self):
        z = np.array([0.3, -1.2, 0.8, 2.0])
        assert evaluate_group_metric("bimodality", None, 7 * z) == pytest.approx(
            evaluate_group_metric("bimodality", None, z), rel=1e-12
        )

    def test_unknown_metric(self):
        with pytest.raises(UnknownMetricError):
            evaluate_group_metric("modularity", None, B_INTRO)
        with pytest.raises(UnknownMetricError):
            is_group_based("modularity")

    def test_variance_flagged_non_group(self):
        assert not is_group_based("variance")
        assert is_group_based("bimodality")
        assert is_group_based("local_agreement")


def _random_case(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 40))
    g = random_connected_graph(rng, n, extra=n)
    z = rng.standard_normal(n) * rng.uniform(0.5, 3.0)
    if np.all(z == z[0]):  # effectively impossible, but keep the guard
        z[0] += 1.0
    return g, z


class TestGroupBasedAxioms:
    """Sign, shift, and scale invariance on random inputs."""

    @given(seed=st.integers(0, 2**31 - 1),
           shift=st.floats(-8, 8, allow_nan=False),
           scale=st.floats(0.25, 8.0))
    @settings(max_examples=80, deadline=None)
    def test_bimodality_invariances(self, seed, shift, scale):
        g, z = _random_case(seed)
        base = bimodality(z)
        assert bimodality(-z) == pytest.approx(base, rel=1e-10)
        assert bimodality(z + shift) == pytest.approx(base, rel=1e-10)
        assert bimodality(scale * z) == pytest.approx(base, rel=1e-10)
        assert bimodality(-scale * z) == pytest.approx(base, rel=1e-10)

    @given(seed=st.integers(0, 2**31 - 1),
           shift=st.floats(-8, 8, allow_nan=False),
           scale=st.floats(0.25, 8.0))
    @settings(max_examples=80, deadline=None)
    def test_local_agreement_invariances(self, seed, shift, scale):
        g, z = _random_case(seed)
        base = local_agreement(g, z)
        assert local_agreement(g, -z) == pytest.approx(base, rel=1e-10, abs=1e-10)
        assert local_agreement(g, z + shift) == pytest.approx(base, rel=1e-10, abs=1e-10)
        assert local_agreement(g, scale * z) == pytest.approx(base, rel=1e-10, abs=1e-10)


class TestMetricSeriesIO:
    def test_csv_with_undefined_point(self, tmp_path):
        series = MetricSeries(metric="bimodality", points=((0, None), (1, 0.5)))
        save_metric_series(series, tmp_path / "s.csv")
        assert (tmp_path / "s.csv").read_text() == "t,value\n0,\n1,0.5\n"
