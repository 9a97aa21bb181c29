"""Tests for the expressiveness oracles: hub-and-cycle pairs, ports, mean/max and small examples."""

import math

import numpy as np
import pytest

from dropgnn.engine.analytic import analytic_example1, analytic_example3
from dropgnn.engine.augment import random_ports
from dropgnn.engine.model import build_gin
from dropgnn.errors import EnumerationLimitError, GraphError, NotOneCompleteError
from dropgnn.graphs.families import cycle_graph, path_graph, star_graph
from dropgnn.graphs.wl import isomorphic_small, wl_distinguishable
from dropgnn.lab.examples import (
    cycle_dropouts,
    dropout_values,
    example_pair,
    node_value,
    output_distribution,
)
from dropgnn.lab.mean import (
    UNSEPARATED,
    dropout_outcomes,
    max_aggregation_gap,
    mean_counterexample,
    mean_separator,
    threshold_probability,
)
from dropgnn.lab.ports import (
    port_observations,
    port_reconstruct,
    reconstruction_matches,
    reconstruction_trials,
    reconstructions,
)
from dropgnn.lab.theorem3 import dropout_equivalent, smallest_separating_k, theorem3_pair


class TestHubAndCycles:
    def test_pair_shape(self):
        g1, g2, hub = theorem3_pair(5)
        assert g1.node_count == g2.node_count == 11
        assert hub == 10
        assert g1.degrees()[hub] == g2.degrees()[hub] == 10

    def test_pair_is_wl_equivalent_but_not_isomorphic(self):
        g1, g2, _ = theorem3_pair(4)
        assert not wl_distinguishable(g1, g2)
        assert not isomorphic_small(g1, g2)

    def test_small_dropouts_do_not_separate(self):
        g1, g2, hub = theorem3_pair(5)
        report = dropout_equivalent(g1, g2, hub, hub, 2, 2)
        assert report.equivalent
        assert report.witness is None
        assert report.gamma1 == report.gamma2 == 10
        assert report.case_counts(1) == ([10], [10])
        assert report.case_counts(2) == ([10, 10, 25], [10, 10, 25])
        assert smallest_separating_k(g1, g2, hub, hub, 2, 2) is None

    def test_length_five_pair_is_not_isomorphic(self):
        g1, g2, _ = theorem3_pair(5)
        assert not wl_distinguishable(g1, g2)
        assert not isomorphic_small(g1, g2)

    def test_three_dropouts_separate_length_five(self):
        g1, g2, hub = theorem3_pair(5)
        report = dropout_equivalent(g1, g2, hub, hub, 2, 3)
        assert not report.equivalent
        assert report.witness.k == 3
        assert smallest_separating_k(g1, g2, hub, hub, 2, 3) == 3

    def test_length_three_separates_at_two(self):
        g1, g2, hub = theorem3_pair(3)
        assert dropout_equivalent(g1, g2, hub, hub, 2, 1).equivalent
        report = dropout_equivalent(g1, g2, hub, hub, 2, 2)
        assert not report.equivalent
        assert report.witness.k == 2
        assert report.witness.count1 != report.witness.count2

    def test_frame(self):
        g1, g2, hub = theorem3_pair(3)
        frame = dropout_equivalent(g1, g2, hub, hub, 1, 1).to_frame()
        assert list(frame.columns) == ["k", "signature", "count_g1", "count_g2"]
        assert (frame["count_g1"] == frame["count_g2"]).all()

    def test_witness_for_different_neighborhoods(self):
        report = dropout_equivalent(path_graph(3), star_graph(2), 0, 0, 2, 1)
        assert not report.equivalent
        assert report.witness.k == 0
        assert {report.witness.count1, report.witness.count2} == {0, 1}

    def test_gamma_mismatch(self):
        report = dropout_equivalent(cycle_graph(4), cycle_graph(8), 0, 0, 2, 1)
        assert report.witness.k == 0
        assert report.witness.signature is None
        assert (report.witness.count1, report.witness.count2) == (3, 4)

    def test_guards(self):
        with pytest.raises(ValueError):
            theorem3_pair(2)
        with pytest.raises(ValueError):
            dropout_equivalent(cycle_graph(4), cycle_graph(4), 0, 0, 1, -1)
        g1, g2, hub = theorem3_pair(20)
        with pytest.raises(EnumerationLimitError):
            dropout_equivalent(g1, g2, hub, hub, 1, 20)


class TestPortReconstruction:
    def test_random_graphs(self):
        outcomes = reconstruction_trials(50, seed=0)
        assert len(outcomes) == 50
        assert all(outcomes)

    def test_small_random_graphs(self):
        assert all(reconstruction_trials(25, seed=1, max_nodes=9, max_degree=3, d=2))

    def test_cycle(self):
        g = random_ports(cycle_graph(6), np.random.default_rng(1))
        assert reconstruction_matches(g, 0, 3)

    def test_ports_separate_hub_pair(self):
        g1, g2, hub = theorem3_pair(5)
        rebuilt1, rebuilt2 = reconstructions([g1, g2], hub, 2, seed=0)
        assert rebuilt1.node_count == rebuilt2.node_count == 11
        assert isomorphic_small(rebuilt1, g1)
        assert isomorphic_small(rebuilt2, g2)
        assert not isomorphic_small(rebuilt1, rebuilt2)

    def test_reconstruction_ignores_port_draw(self):
        g1, _, hub = theorem3_pair(4)
        first = reconstructions([g1], hub, 2, seed=0)[0]
        second = reconstructions([g1], hub, 2, seed=7)[0]
        assert isomorphic_small(first, second)

    def test_missing_dropout(self):
        g = random_ports(cycle_graph(5), np.random.default_rng(0))
        obs = port_observations(g, 0, 2, include=[1])
        with pytest.raises(NotOneCompleteError):
            port_reconstruct(obs)

    def test_needs_ports(self):
        with pytest.raises(GraphError, match="port"):
            port_observations(cycle_graph(4), 0, 1)

    def test_center_cannot_drop(self):
        g = random_ports(cycle_graph(4), np.random.default_rng(0))
        with pytest.raises(GraphError):
            port_observations(g, 0, 1, include=[0])

    def test_depth_range(self):
        g = random_ports(cycle_graph(4), np.random.default_rng(0))
        obs = port_observations(g, 0, 1)
        with pytest.raises(ValueError):
            port_reconstruct(obs, 2)


class TestMeanAggregation:
    def test_outcomes(self):
        dist = dropout_outcomes([1.0, 2.0], 0.5)
        assert dist == {0.0: 0.25, 1.0: 0.25, 1.5: 0.25, 2.0: 0.25}

    def test_threshold_probability(self):
        assert threshold_probability([1.0, 3.0], 2.5, 0.5) == pytest.approx(0.25)

    def test_different_means(self):
        sep = mean_separator([1, 1], [2, 2])
        assert sep.direction == 2
        assert sep.p == pytest.approx(0.25)
        assert sep.tau == pytest.approx(1.5)
        assert sep.bound == pytest.approx(0.125)
        assert sep.gap([1, 1], [2, 2]) >= sep.bound

    def test_equal_means_equal_size(self):
        s1, s2 = [1, 2, 3], [2, 2, 2]
        sep = mean_separator(s1, s2)
        assert sep.index == 0
        assert sep.direction == 1
        assert sep.p == pytest.approx(1 / 18)
        assert sep.tau == pytest.approx(2.25)
        assert sep.bound == pytest.approx(3 / 144)
        assert sep.gap(s1, s2) == pytest.approx(17 / 324)

    def test_distinct_means_at_gamma_two(self):
        s1, s2 = [1, 1], [1, 3]
        sep = mean_separator(s1, s2)
        assert sep.p == pytest.approx(0.25)
        assert 1 < sep.tau < 2
        assert sep.gap(s1, s2) == pytest.approx(0.75)
        assert sep.gap(s1, s2) >= (1 - sep.p) ** 2 > 0.55

    def test_equal_means_first_difference(self):
        s1, s2 = [-3, -3, 3, 3], [-3, -1, 1, 3]
        sep = mean_separator(s1, s2)
        assert sep.index == 1
        assert sep.direction == 1
        assert sep.gap(s1, s2) >= 3 / 256

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_gap_meets_bound_by_enumeration(self, seed):
        rng = np.random.default_rng(seed)
        checked = 0
        while checked < 40:
            n = int(rng.integers(2, 13))
            s1 = rng.integers(-5, 6, size=n).tolist()
            s2 = rng.integers(-5, 6, size=n).tolist()
            if checked % 2 == 0:
                s2[-1] = sum(s1) - sum(s2[:-1])
            if sorted(s1) == sorted(s2):
                continue
            sep = mean_separator(s1, s2)
            assert sep.gap(s1, s2) >= sep.bound, (s1, s2)
            checked += 1

    def test_equal_means_different_size(self):
        assert mean_separator([0], [1, -1]) == UNSEPARATED

    def test_identical_multisets(self):
        with pytest.raises(ValueError):
            mean_separator([1, 2], [2, 1])

    def test_counterexample(self):
        ce = mean_counterexample(4, 0.1)
        assert ce.s1 == [-3, -3, 3, 3]
        assert ce.s2 == [-4, -4, 0, 4, 4]
        assert ce.zero_equal
        assert ce.nonzero_means_equal
        assert ce.gap_matches
        assert ce.one_gap == pytest.approx(2 * 0.01 * 0.9**3)
        assert ce.to_dict()["length"] == 4

    def test_counterexample_length(self):
        with pytest.raises(ValueError):
            mean_counterexample(3)

    def test_max_gap_minimum_only(self):
        gap = max_aggregation_gap([1, 5, 7], [2, 5, 7], 0.25)
        assert gap.matches
        assert gap.probability == pytest.approx(0.25**2 * 0.75**2)

    def test_max_gap_general(self):
        gap = max_aggregation_gap([1, 2], [1, 3], 0.5)
        assert gap.expected is None
        assert not gap.matches
        assert gap.probability == pytest.approx(0.5 * 0.5)

    def test_max_gap_sizes(self):
        with pytest.raises(ValueError):
            max_aggregation_gap([1], [1, 2], 0.1)


class TestExamples:
    def test_example1_values(self):
        g1, g2, u = example_pair(1)
        model = analytic_example1()
        assert sorted(v for _, v in dropout_values(model, g1, u, 2, 1)) == [5.0, 5.0, 7.0]
        assert sorted(v for _, v in dropout_values(model, g2, u, 2, 1)) == [5.0, 5.0, 8.0, 8.0]

    def test_example2_cycle_dropouts(self):
        g1, g2, u = example_pair(2)
        assert not wl_distinguishable(g1, g2)
        found1, found2 = cycle_dropouts(g1, u, 3), cycle_dropouts(g2, u, 3)
        assert found1[1] == [(3,)]
        assert {k: len(v) for k, v in found1.items()} == {1: 1, 2: 2, 3: 1}
        assert {k: len(v) for k, v in found2.items()} == {1: 0, 2: 2, 3: 0}

    def test_example3_probabilities(self):
        g1, g2, u = example_pair(3)
        model = analytic_example3()
        left = output_distribution(model, g1, u, 0.25, 1)
        right = output_distribution(model, g2, u, 0.25, 1)
        assert left[1.0] == pytest.approx(3 / 16)
        assert right[1.0] == pytest.approx(15 / 256)
        assert math.fsum(left.values()) == pytest.approx(1.0)

    def test_node_value(self):
        g1, _, u = example_pair(1)
        assert node_value(analytic_example1(), g1, u) == 9.0

    def test_requires_node_removal(self):
        g1, _, u = example_pair(1)
        with pytest.raises(ValueError, match="removes dropped nodes"):
            dropout_values(build_gin(1, 2, 1, 2), g1, u, 1, 1)

    def test_unknown_example(self):
        with pytest.raises(ValueError):
            example_pair(4)
