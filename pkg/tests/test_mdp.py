"""
Filename: test_mdp.py
Project: TD Clock Stability (TDCS)
Description: Two-action experiment MDP, behavior and target chains, step sampling and importance ratios
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import numpy as np
import pytest

from td_clock_stability._exceptions import DimensionError
from td_clock_stability._exceptions import DomainError
from td_clock_stability._exceptions import KappaBoundError
from td_clock_stability._exceptions import StructureError
from td_clock_stability.models.mdp_models import PolicyPair
from td_clock_stability.models.mdp_models import TabularMDP
from td_clock_stability.services.counterexample import build_family
from td_clock_stability.services.mdp import behavior_transition_matrix
from td_clock_stability.services.mdp import build_experiment_mdp
from td_clock_stability.services.mdp import expected_reward_vector
from td_clock_stability.services.mdp import importance_ratio_check
from td_clock_stability.services.mdp import kappa_max
from td_clock_stability.services.mdp import sample_step
from td_clock_stability.services.mdp import target_transition_matrix
from td_clock_stability.services.polyalg import stationary_distribution


@pytest.fixture(scope="module")
def family_mdp():
    return build_experiment_mdp(build_family(23))


class TestKappaMax:
    def test_family_bound_is_alpha(self, family23):
        assert kappa_max(family23.P_pi, family23.d_mu) == pytest.approx(1.0 / 550.0, rel=1e-12)

    def test_three_state(self, three_state):
        assert kappa_max(three_state.P_pi, three_state.d_mu) == pytest.approx(0.5)

    def test_capped_below_one(self):
        # P_pi = e d^T gives a bound of exactly 1
        d = np.array([0.25, 0.75])
        assert kappa_max(np.outer(np.ones(2), d), d) < 1.0


class TestExperimentMDP:
    def test_behavior_chain_is_rank_one(self, family_mdp, family23):
        mdp, policies = family_mdp
        P_mu = behavior_transition_matrix(mdp, policies)
        np.testing.assert_allclose(P_mu, np.outer(np.ones(family23.n), family23.d_mu), atol=1e-12)

    def test_target_chain_is_P_pi(self, family_mdp, family23):
        mdp, policies = family_mdp
        np.testing.assert_allclose(target_transition_matrix(mdp, policies), family23.P_pi, atol=1e-15)

    def test_d_mu_is_stationary_for_the_behavior(self, family_mdp, family23):
        mdp, policies = family_mdp
        d = stationary_distribution(behavior_transition_matrix(mdp, policies))
        np.testing.assert_allclose(d, family23.d_mu, atol=1e-12)

    def test_default_kappa_and_ratios(self, family_mdp):
        _, policies = family_mdp
        np.testing.assert_allclose(policies.mu[:, 0], 1.0 / 550.0, rtol=1e-12)
        np.testing.assert_allclose(policies.rho[:, 0], 550.0, rtol=1e-9)
        assert np.all(policies.rho[:, 1] == 0.0)

    def test_rewards_are_zero(self, family_mdp):
        mdp, policies = family_mdp
        assert np.all(expected_reward_vector(mdp, policies) == 0.0)
        assert mdp.initial[0] == 1.0

    def test_labels(self, family_mdp):
        mdp, _ = family_mdp
        assert mdp.action_labels == ("a0", "a1")
        assert mdp.state_labels[-1] == "c"

    def test_instance_source(self, three_state):
        mdp, policies = build_experiment_mdp(three_state, kappa=0.25)
        assert mdp.state_labels == ("s_0", "s_1", "s_2")
        np.testing.assert_allclose(behavior_transition_matrix(mdp, policies), np.outer(np.ones(3), three_state.d_mu), atol=1e-12)

    def test_kappa_above_the_bound(self, family23):
        with pytest.raises(KappaBoundError):
            build_experiment_mdp(family23, kappa=0.5)

    @pytest.mark.parametrize("kappa", [0.0, 1.0])
    def test_kappa_out_of_range(self, three_state, kappa):
        with pytest.raises(DomainError):
            build_experiment_mdp(three_state, kappa=kappa)

    def test_unnormalized_weights(self, random_instance):
        inst = random_instance(3)
        if abs(inst.d_mu.sum() - 1.0) < 1e-9:
            pytest.skip("random weights happened to sum to one")
        with pytest.raises(DomainError):
            build_experiment_mdp(inst)


class TestSampling:
    def test_next_state_follows_d_mu(self, three_state, rng):
        mdp, policies = build_experiment_mdp(three_state)
        counts = np.zeros(3)
        for _ in range(20000):
            counts[sample_step(mdp, policies, 0, rng).s_next] += 1
        np.testing.assert_allclose(counts / counts.sum(), three_state.d_mu, atol=0.02)

    def test_sample_fields(self, three_state, rng):
        mdp, policies = build_experiment_mdp(three_state)
        sample = sample_step(mdp, policies, 1, rng)
        assert sample.s == 1
        assert sample.r == 0.0
        assert sample.rho == policies.rho[1, sample.a]

    def test_importance_ratios_are_unbiased(self, family_mdp, rng):
        mdp, policies = family_mdp
        estimate, stderr = importance_ratio_check(mdp, policies, 0, 100000, rng)
        tolerance = np.maximum(4.0 * stderr, 1e-12)
        assert np.all(np.abs(estimate - policies.pi[0]) <= tolerance)


class TestModels:
    def test_rho_from_policies(self):
        policies = PolicyPair(pi=[[1.0, 0.0]], mu=[[0.25, 0.75]])
        np.testing.assert_allclose(policies.rho, [[4.0, 0.0]])

    def test_uncovered_target_action(self):
        with pytest.raises(StructureError):
            PolicyPair(pi=[[0.0, 1.0]], mu=[[1.0, 0.0]])

    def test_transition_rows_must_sum_to_one(self):
        with pytest.raises(StructureError):
            TabularMDP(transition=[[[0.5, 0.2]], [[0.5, 0.5]]], reward=[[0.0], [0.0]], initial=[1.0, 0.0])

    def test_reward_shape_is_logged_then_raised(self, caplog):
        with pytest.raises(DimensionError) as info:
            TabularMDP(transition=[[[1.0, 0.0]], [[0.0, 1.0]]], reward=[[0.0, 0.0]], initial=[1.0, 0.0])
        record = caplog.records[-1]
        assert record.levelname == "ERROR"
        assert record.failure_reason == "DIMENSION_ERROR"
        assert record.getMessage() == info.value.message

    def test_policy_shapes_must_agree(self, caplog):
        with pytest.raises(DimensionError):
            PolicyPair(pi=[[1.0, 0.0]], mu=[[0.5, 0.5], [0.5, 0.5]])
        assert caplog.records[-1].failure_reason == "DIMENSION_ERROR"
