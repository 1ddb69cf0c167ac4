import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarlab.dynamics import (
    ExplicitInit,
    StandardNormalInit,
    UniformInit,
    consensus_value,
    degroot_step,
    fj_step,
    load_opinions,
    make_initial_opinions,
    run_degroot,
    save_opinions,
    save_trajectory,
)
from polarlab.errors import IsolatedNodeError, ParameterError, StructureError
from polarlab.graphs import Graph, generate_sbm
from polarlab.metrics import variance

from conftest import (
    circulant_graph,
    complete_graph,
    cycle_graph,
    graph_from_edges,
    path_graph,
    random_connected_graph,
    star_graph,
)


class TestDegrootStep:
    def test_path_averaging_by_hand(self):
        z = np.array([0.0, 3.0, 6.0])
        out = degroot_step(path_graph(3), z)
        assert np.allclose(out, [3.0, 3.0, 3.0])
        assert np.array_equal(z, [0.0, 3.0, 6.0])  # input untouched

    def test_consensus_is_fixed_point(self, rng):
        g = random_connected_graph(rng, 15, extra=10, weighted=True)
        z = np.full(15, 3.7)
        assert np.allclose(degroot_step(g, z), z, atol=1e-12)

    def test_self_loop_self_average(self):
        g = Graph.from_pairs(1, [0], [0], [2.5])
        assert degroot_step(g, np.array([5.0])) == pytest.approx([5.0])

    def test_isolated_node_named(self):
        g = graph_from_edges(3, [(0, 1)])
        with pytest.raises(IsolatedNodeError, match="node 2"):
            degroot_step(g, np.zeros(3))


class TestRunDegroot:
    def test_zero_steps_keeps_initial_only(self):
        traj = run_degroot(path_graph(3), ExplicitInit(np.array([1.0, 2.0, 3.0])), steps=0)
        assert traj.times == [0]

    def test_composition(self):
        g = cycle_graph(5)
        traj = run_degroot(g, StandardNormalInit(3), steps=2, stride=1)
        z0 = traj.at(0)
        assert np.allclose(traj.at(2), degroot_step(g, degroot_step(g, z0)))

    def test_stride_thinning_keeps_first_and_last(self):
        traj = run_degroot(cycle_graph(6), StandardNormalInit(0), steps=7, stride=3)
        assert traj.times == [0, 3, 6, 7]

    def test_bad_params(self):
        with pytest.raises(ParameterError):
            run_degroot(path_graph(2), StandardNormalInit(0), steps=-1)
        with pytest.raises(ParameterError):
            run_degroot(path_graph(2), StandardNormalInit(0), steps=1, stride=0)


class TestInitSpecs:
    def test_standard_normal_reproducible(self):
        a = make_initial_opinions(StandardNormalInit(9), 50)
        b = make_initial_opinions(StandardNormalInit(9), 50)
        assert np.array_equal(a, b)

    def test_uniform_range(self):
        z = make_initial_opinions(UniformInit(-2.0, -1.0, 4), 1000)
        assert z.min() >= -2.0 and z.max() < -1.0

    def test_uniform_rejects_bad_interval(self):
        with pytest.raises(ParameterError):
            UniformInit(1.0, 1.0, 0)

    def test_explicit_checks_length_and_finiteness(self):
        with pytest.raises(ParameterError):
            make_initial_opinions(ExplicitInit(np.array([1.0, 2.0])), 3)
        with pytest.raises(ParameterError):
            make_initial_opinions(ExplicitInit(np.array([1.0, np.nan])), 2)


class TestConsensus:
    def test_single_edge_mean(self):
        g = graph_from_edges(2, [(0, 1)])
        assert consensus_value(g, np.array([0.0, 4.0])) == pytest.approx(2.0)

    def test_triangle_equal_degrees(self):
        assert consensus_value(complete_graph(3), np.array([1.0, 2.0, 3.0])) == pytest.approx(2.0)

    def test_star_degree_weighted(self):
        g = star_graph(3)
        z = np.array([6.0, 0.0, 0.0, 0.0])
        assert consensus_value(g, z) == pytest.approx(3.0)

    def test_disconnected_rejected(self):
        g = graph_from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(StructureError):
            consensus_value(g, np.zeros(4))

    @given(seed=st.integers(0, 2**31 - 1))
    @settings(max_examples=15, deadline=None)
    def test_invariant_along_trajectory(self, seed):
        rng = np.random.default_rng(seed)
        g = random_connected_graph(rng, 20, extra=12, weighted=True)
        z = rng.standard_normal(20)
        c0 = consensus_value(g, z)
        for _ in range(30):
            z = degroot_step(g, z)
            assert consensus_value(g, z) == pytest.approx(c0, rel=1e-10)

    def test_convergence_to_consensus(self):
        g = generate_sbm(2, 120, 0.4, 0.1, seed=2)
        assert g.structure.connected
        z = np.random.default_rng(0).standard_normal(120)
        c = consensus_value(g, z)
        for _ in range(400):
            z = degroot_step(g, z)
        assert np.max(np.abs(z - c)) <= 1e-8


class TestLongHorizonConvergence:
    """The paper-scale check: by 1000 updates on the five-community
    graph, bimodality sits at its equilibrium value.  The raw float64
    vector collapses to an exactly (or nearly) constant state long
    before that, so the series is evaluated on the deviation direction,
    which tracks exact arithmetic."""

    def test_snapshot_1000_matches_equilibrium_bimodality(self):
        from polarlab.dynamics import deviation_from_consensus, deviation_step
        from polarlab.equilibrium import equilibrium_metric
        from polarlab.metrics import bimodality

        g = generate_sbm(5, 1000, 0.1, 0.01, seed=101)
        assert g.structure.connected
        target = equilibrium_metric("bimodality", g).predicted
        _, w, _ = deviation_from_consensus(
            g, np.random.default_rng(7).standard_normal(1000)
        )
        for _ in range(1000):
            w, _ = deviation_step(g, w)
        assert abs(bimodality(w) - target) <= 1e-3

    def test_raw_vector_collapses_below_resolution(self):
        # the true centered magnitude after 150 steps is ~0.68^150, far
        # below what float64 can carry next to the consensus offset; the
        # raw iterate must sit at exact constancy or rounding-noise level
        g = generate_sbm(5, 1000, 0.1, 0.01, seed=101)
        z = np.random.default_rng(7).standard_normal(1000)
        for _ in range(150):
            z = degroot_step(g, z)
        nb = float(np.linalg.norm(z - z.mean()))
        assert nb == 0.0 or nb > 1e-30  # nowhere near the true ~1e-25


class TestVarianceMonotonicity:
    def test_regular_graph_nonincreasing(self):
        g = circulant_graph(101, [1, 3, 7])  # odd order: non-bipartite
        z = np.random.default_rng(5).standard_normal(101)
        prev = variance(z)
        for _ in range(200):
            z = degroot_step(g, z)
            cur = variance(z)
            assert cur <= prev + 1e-12
            prev = cur


class TestBipartiteCaveat:
    def test_two_periodic_signs_detected(self):
        g = cycle_graph(8)  # bipartite, lambda = -1 present
        z0 = np.random.default_rng(1).standard_normal(8)
        c = consensus_value(g, z0)
        z = z0.copy()
        history = []
        for _ in range(200):
            z = degroot_step(g, z)
            history.append(np.sign(z - c))
        # the deviation sign pattern settles into a 2-cycle, not a fixed point
        assert np.array_equal(history[-1], history[-3])
        assert not np.array_equal(history[-1], history[-2])
        # and the opinions do not approach consensus
        assert np.max(np.abs(z - c)) > 1e-3


class TestFJStep:
    def test_fixed_point_at_shared_constant(self):
        g = complete_graph(4)
        z = np.full(4, 2.0)
        assert np.allclose(fj_step(g, z, z), z)

    def test_isolated_node_adopts_innate(self):
        g = Graph.from_pairs(1, [], [])
        out = fj_step(g, np.array([0.0]), np.array([2.0]))
        assert out == pytest.approx([2.0])

    def test_path_by_hand(self):
        out = fj_step(path_graph(3), np.array([0.0, 3.0, 6.0]), np.zeros(3))
        assert np.allclose(out, [1.5, 2.0, 1.5])

    def test_length_mismatch(self):
        with pytest.raises(ParameterError):
            fj_step(path_graph(3), np.zeros(3), np.zeros(2))


class TestOpinionIO:
    def test_round_trip_plain(self, tmp_path):
        z = np.array([1.5, -2.25, 0.125])
        save_opinions(z, tmp_path / "z.csv")
        assert np.array_equal(load_opinions(tmp_path / "z.csv"), z)

    def test_round_trip_with_header(self, tmp_path):
        z = np.array([0.1, 0.2])
        save_opinions(z, tmp_path / "z.csv", header=True)
        text = (tmp_path / "z.csv").read_text()
        assert text.startswith("node,value\n")
        assert np.array_equal(load_opinions(tmp_path / "z.csv"), z)

    def test_trajectory_long_format(self, tmp_path):
        traj = run_degroot(path_graph(3), ExplicitInit(np.array([0.0, 3.0, 6.0])), steps=1)
        save_trajectory(traj, tmp_path / "t.csv")
        lines = (tmp_path / "t.csv").read_text().splitlines()
        assert lines[0] == "t,node,value"
        assert len(lines) == 1 + 2 * 3
