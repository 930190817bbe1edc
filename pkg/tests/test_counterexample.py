"""
Filename: test_counterexample.py
Project: TD Clock Stability (TDCS)
Description: The m > 22 counterexample family, its reduced block and the predicted stability region
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from td_clock_stability._exceptions import DomainError
from td_clock_stability.models.instance_models import strongly_connected_labels
from td_clock_stability.services.counterexample import alpha_of
from td_clock_stability.services.counterexample import b_matrix
from td_clock_stability.services.counterexample import build_family
from td_clock_stability.services.counterexample import exact_constants
from td_clock_stability.services.counterexample import family_instance
from td_clock_stability.services.counterexample import hurwitz_cubic
from td_clock_stability.services.counterexample import predicted_region
from td_clock_stability.services.counterexample import reduced_block
from td_clock_stability.services.counterexample import subspace_bases
from td_clock_stability.services.counterexample import verify_block_structure
from td_clock_stability.services.polyalg import is_hurwitz
from td_clock_stability.services.polyalg import stationary_distribution
from td_clock_stability.services.stability import build_A
from td_clock_stability.services.stability import is_positive_stable
from td_clock_stability.services.stability import stability_region


class TestConstants:
    def test_m23(self):
        constants = exact_constants(23)
        assert constants.alpha == Fraction(1, 550)
        assert constants.d_c == Fraction(526, 550)
        assert constants.identity == 22

    def test_m24(self):
        assert exact_constants(24).alpha == Fraction(1, 299)
        assert alpha_of(24) == 1.0 / 299.0

    @pytest.mark.parametrize("m", [23, 30, 100, 1000])
    def test_identity_holds_for_every_m(self, m):
        constants = exact_constants(m)
        assert constants.identity == 22
        assert constants.d_c_minus_alpha > 0

    @pytest.mark.parametrize("m", [22, 5, 23.0, True])
    def test_rejects_small_or_non_integer_m(self, m):
        with pytest.raises(DomainError):
            exact_constants(m)


class TestFamily:
    def test_shapes_and_labels(self, family23):
        assert family23.n == 25
        assert family23.labels[0] == "a_1"
        assert family23.labels[-2:] == ("b", "c")

    def test_weights(self, family23):
        np.testing.assert_allclose(family23.d_mu[:24], 1.0 / 550.0, rtol=1e-15)
        assert abs(family23.d_mu.sum() - 1.0) <= 1e-15

    def test_rows_are_stochastic(self, family23):
        np.testing.assert_allclose(family23.P_pi.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(family23.P_pi >= 0)

    def test_self_loop_on_c(self, family23):
        assert family23.P_pi[family23.c, family23.c] == pytest.approx(1.0 - 1.0 / 526.0)

    def test_P_pi_is_a_lazy_Q(self, family23):
        D = np.diag(family23.d_mu)
        np.testing.assert_allclose(D @ (family23.P_pi - np.eye(family23.n)), family23.alpha * (family23.Q - np.eye(family23.n)), atol=1e-15)

    def test_stationary_distribution_of_P_pi(self, family23):
        d = stationary_distribution(family23.P_pi)
        assert np.all(d > 0)
        assert abs(d.sum() - 1.0) <= 1e-12

    def test_instance_is_normalized(self, instance23):
        assert instance23.normalized
        assert instance23.name == "example1-m23"


class TestReducedBlock:
    def test_b_matrix_scales_A(self, family23, instance23):
        t = 1.7
        np.testing.assert_allclose(family23.alpha * b_matrix(family23, t), build_A(instance23, t * family23.alpha), atol=1e-15)

    @pytest.mark.parametrize("t", [0.25, 1.0, 2.0, 3.0, 7.5])
    def test_char_poly_of_block(self, family23, t):
        block = reduced_block(family23, t)
        assert block.M_t.shape == (3, 3)
        np.testing.assert_allclose(block.expected_char_poly, [1.0, t, t, 22.0 * t - 1.0])

    def test_block_acts_on_U(self, family23):
        t = 2.0
        _, U = subspace_bases(family23)
        block = reduced_block(family23, t)
        B = b_matrix(family23, t)
        np.testing.assert_allclose(B @ U, U @ (np.eye(3) - block.M_t), atol=1e-14)

    def test_H_is_fixed(self, family23):
        H, _ = subspace_bases(family23)
        assert H.shape == (25, 22)
        np.testing.assert_allclose(b_matrix(family23, 2.0) @ H, H, atol=1e-14)

    def test_non_positive_t(self, family23):
        with pytest.raises(DomainError):
            reduced_block(family23, 0.0)


class TestHurwitzCubic:
    @pytest.mark.parametrize("t, stable", [(0.5, True), (1.0, False), (2.0, False), (3.0, False), (3.5, True), (10.0, True)])
    def test_stability_window(self, t, stable):
        assert is_hurwitz(hurwitz_cubic(t)) is stable

    def test_matches_reduced_block(self, family23):
        t = 2.0
        block = reduced_block(family23, t)
        np.testing.assert_allclose(hurwitz_cubic(t).coeffs, block.hurwitz_coeffs)

    @pytest.mark.parametrize("t", np.linspace(0.1, 6.0, 25))
    def test_second_determinant_sign(self, t):
        p = hurwitz_cubic(t)
        a1, a2, a3 = p.coeffs[1:]
        assert math.copysign(1.0, a1 * a2 - a3) == math.copysign(1.0, 3.0 * (t - 1.0) * (t - 3.0))


class TestBlockStructure:
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 4.0])
    def test_m23(self, family23, t):
        report = verify_block_structure(family23, t)
        assert report.unit_cluster_size == 22
        assert report.block_mismatch <= 1e-8
        assert report.fixed_subspace_residual <= 1e-12

    def test_larger_m(self):
        report = verify_block_structure(build_family(40), 2.0)
        assert report.unit_cluster_size == 39


class TestPredictedRegion:
    def test_intervals(self, family23):
        region = predicted_region(family23)
        assert region.boundary_roots == [family23.alpha, 3.0 * family23.alpha]
        assert region.contains(0.5 * family23.alpha)
        assert not region.contains(2.0 * family23.alpha)
        assert region.intervals[-1].is_unbounded

    @pytest.mark.parametrize("m", [23, 24, 30, pytest.param(50, marks=pytest.mark.slow)])
    def test_matches_computed_region(self, m):
        family = build_family(m)
        computed = stability_region(family_instance(family))
        predicted = predicted_region(family)
        np.testing.assert_allclose(computed.boundary_roots, predicted.boundary_roots, rtol=1e-7)
        assert len(computed.intervals) == len(predicted.intervals)
        assert computed.intervals[0].lo == 0.0
        assert computed.intervals[-1].is_unbounded

    @pytest.mark.parametrize("m", [23, 24, 30])
    def test_generic_stability_test_matches_membership(self, m):
        family = build_family(m)
        inst = family_instance(family)
        predicted = predicted_region(family)
        for t in (0.5, 2.0, 4.0):
            assert is_positive_stable(build_A(inst, t * family.alpha)) == predicted.contains(t * family.alpha)


def test_large_family_is_irreducible():
    family = build_family(1000)
    count, _ = strongly_connected_labels(family.P_pi)
    assert count == 1
