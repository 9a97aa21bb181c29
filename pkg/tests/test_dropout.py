"""Tests for dropout probabilities, exact distributions, run bounds, masks and Chernoff checks."""

import math

import numpy as np
import pytest

from dropgnn.dropout.chernoff import Regime, RunBudget, chernoff_validate
from dropgnn.dropout.probability import (
    CHERNOFF_CONSTANT,
    bitmask,
    dataset_dropout_p,
    empirical_distribution,
    exact_distribution,
    expected_one,
    members,
    optimal_p,
    runs_k_separated,
    runs_one_complete,
    subset_probability,
)
from dropgnn.dropout.sampling import derive_seed, sample_mask_matrix, sample_masks
from dropgnn.errors import EnumerationLimitError
from dropgnn.graphs.core import d_hop_neighborhood
from dropgnn.graphs.families import cycle_graph


class TestOptimalP:
    def test_value(self):
        assert optimal_p(5) == pytest.approx(1 / 6)

    def test_maximizes_single_dropout_probability(self):
        grid = np.arange(0.0, 1.0, 1e-4)
        for gamma in range(1, 51):
            p = optimal_p(gamma)
            best = np.max(grid * (1.0 - grid) ** gamma)
            assert p * (1.0 - p) ** gamma >= best - 1e-15

    def test_rejects_empty_neighborhood(self):
        with pytest.raises(ValueError):
            optimal_p(0)


class TestExactDistribution:
    @pytest.mark.parametrize("gamma", [1, 5, 10, 15])
    def test_mass_is_survival_probability(self, gamma):
        p = optimal_p(gamma)
        dist = exact_distribution(gamma, p)
        assert abs(dist.total_mass - (1.0 - p)) < 1e-12
        assert dist.residual_mass == 0.0
        assert len(dist.entries) == 2**gamma

    def test_truncated_mass_keeps_residual(self):
        dist = exact_distribution(10, 0.2, max_k=2)
        assert len(dist.entries) == 1 + 10 + 45
        assert dist.residual_mass > 0.0
        assert abs(dist.total_mass - 0.8) < 1e-12

    def test_subset_probability(self):
        dist = exact_distribution(4, 0.25)
        assert dist.probability([0, 2]) == pytest.approx(0.25**2 * 0.75**3)
        assert dist.probability([]) == pytest.approx(0.75**5)

    @pytest.mark.parametrize("gamma", range(1, 11))
    def test_expected_counts_shrink_with_size(self, gamma):
        p, r = optimal_p(gamma), 1000
        e1 = expected_one(gamma, p, r)
        for k in range(1, min(gamma, 4) + 1):
            ek = r * subset_probability(k, gamma, p)
            assert ek == pytest.approx(gamma ** (1 - k) * e1, rel=1e-12)

    def test_expected_count_method(self):
        dist = exact_distribution(3, 0.25)
        assert dist.expected_count([1], 100) == pytest.approx(expected_one(3, 0.25, 100))

    def test_enumeration_guard(self):
        with pytest.raises(EnumerationLimitError):
            exact_distribution(26, 0.1, max_k=1)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            exact_distribution(3, 1.5)
        with pytest.raises(ValueError):
            exact_distribution(3, 0.1, max_k=4)

    def test_frame_columns(self):
        frame = exact_distribution(3, 0.25, max_k=1).to_frame()
        assert list(frame.columns) == ["subset_bitmask", "size", "probability", "count"]
        assert frame["size"].tolist() == [0, 1, 1, 1]
        assert frame["count"].sum() == 0

    def test_bitmask_roundtrip(self):
        assert bitmask([0, 3]) == 9
        assert members(9) == (0, 3)


class TestEmpiricalDistribution:
    def test_counts_cover_runs_with_center(self):
        g = cycle_graph(8)
        hood = d_hop_neighborhood(g, 0, 2)
        batch = sample_masks(g, 0.2, 400, master_seed=7)
        dist = empirical_distribution(batch.masks, 0, hood.others, 0.2)
        assert dist.runs_with_center == int((~batch.masks[:, 0]).sum())
        assert sum(dist.empirical.values()) == dist.runs_with_center
        assert dist.nodes == hood.others

    def test_count_lookup(self):
        masks = np.array([[False, True, False], [False, False, False], [True, True, True]])
        dist = empirical_distribution(masks, 0, [1, 2], 0.3)
        assert dist.runs_with_center == 2
        assert dist.count([0]) == 1
        assert dist.count([]) == 1
        assert dist.count([0, 1]) == 0

    def test_count_without_samples(self):
        with pytest.raises(ValueError, match="empirical"):
            exact_distribution(2, 0.3).count([0])


class TestRunBounds:
    def test_one_complete_formula(self):
        expected = math.ceil(CHERNOFF_CONSTANT / 0.9**2 * 6 * math.log(2 * 5 * 5))
        assert runs_one_complete(5, 0.9, 5) == expected

    def test_k_separated_is_larger(self):
        assert runs_k_separated(15, 0.5, 10) > runs_one_complete(15, 0.5, 10)

    def test_union_bound_over_nodes(self):
        assert runs_one_complete(5, 0.5, 10, nodes=20) > runs_one_complete(5, 0.5, 10)

    def test_monotone_in_t(self):
        assert runs_one_complete(5, 0.5, 100) > runs_one_complete(5, 0.5, 10)

    @pytest.mark.parametrize(
        "args", [(0, 0.5, 10), (5, 0.0, 10), (5, 1.5, 10), (5, 0.5, 1.0)]
    )
    def test_invalid_arguments(self, args):
        with pytest.raises(ValueError):
            runs_one_complete(*args)


class TestDatasetDropoutP:
    def test_mean_rule(self):
        assert dataset_dropout_p([16, 16]) == pytest.approx(1 / 16)

    def test_max_rule_and_factor(self):
        assert dataset_dropout_p([10, 20], factor=2.0, rule="max") == pytest.approx(0.1)

    def test_unknown_rule(self):
        with pytest.raises(ValueError, match="rule"):
            dataset_dropout_p([10], rule="median")

    def test_empty(self):
        with pytest.raises(ValueError):
            dataset_dropout_p([])


class TestSampling:
    def test_derive_seed_is_stable(self):
        assert derive_seed(3, "epoch", 4) == derive_seed(3, "epoch", 4)
        assert derive_seed(3, "epoch", 4) != derive_seed(3, "epoch", 5)
        assert derive_seed(3, "eval") != derive_seed(4, "eval")

    def test_rows_depend_only_on_run_index(self):
        long = sample_mask_matrix(12, 0.3, 10, master_seed=11)
        short = sample_mask_matrix(12, 0.3, 5, master_seed=11)
        np.testing.assert_array_equal(long[:5], short)

    def test_threads_match_serial(self):
        serial = sample_mask_matrix(20, 0.2, 16, master_seed=5)
        threaded = sample_mask_matrix(20, 0.2, 16, master_seed=5, jobs=4)
        np.testing.assert_array_equal(serial, threaded)

    def test_zero_probability_drops_nothing(self):
        assert not sample_mask_matrix(10, 0.0, 4, master_seed=1).any()

    def test_rejects_certain_dropout(self):
        with pytest.raises(ValueError):
            sample_mask_matrix(10, 1.0, 4, master_seed=1)

    def test_drop_rate(self):
        batch = sample_masks(cycle_graph(50), 0.25, 2000, master_seed=2)
        assert len(batch) == 2000
        assert batch.node_count == 50
        assert abs(batch.drop_rate().mean() - 0.25) < 0.01
        assert batch[3].seed_provenance == (2, 3)
        np.testing.assert_array_equal(batch[3].kept, ~batch.masks[3])


class TestChernoff:
    def test_one_complete_bound_holds(self):
        budget = RunBudget.from_bound(5, 0.9, 5)
        report = chernoff_validate(5, budget, trials=500, seed=0)
        assert report.r == runs_one_complete(5, 0.9, 5)
        assert report.sufficient
        assert report.passed
        assert report.empirical_mean_one == pytest.approx(report.expected_one, rel=0.05)

    def test_k_separated_bound_holds(self):
        budget = RunBudget.from_bound(5, 0.5, 5, Regime.K_SEPARATED)
        report = chernoff_validate(5, budget, trials=100, seed=1)
        assert report.regime == "k_separated"
        assert report.passed

    def test_single_run_is_insufficient(self):
        report = chernoff_validate(10, RunBudget(r=1, delta=0.5, t=5), trials=200, seed=0)
        assert report.pass_fraction == 0.0
        assert not report.passed
        assert not report.sufficient

    def test_report_dict(self):
        report = chernoff_validate(3, RunBudget(r=10, delta=0.5, t=5), trials=20, seed=0)
        out = report.to_dict()
        assert out["sufficient"] is False
        assert "passed" in out
        assert out["trials"] == 20

    def test_guard(self):
        with pytest.raises(EnumerationLimitError):
            chernoff_validate(26, RunBudget(r=10, delta=0.5, t=5), trials=2, seed=0)

    def test_budget_validation(self):
        with pytest.raises(ValueError):
            RunBudget(r=0, delta=0.5, t=5)
