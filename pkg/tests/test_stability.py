"""
Filename: test_stability.py
Project: TD Clock Stability (TDCS)
Description: Spectrum checks on L, the eta* threshold, Hurwitz stability regions and eigenvalue trajectories
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import math

import mpmath
import numpy as np
import pytest

from td_clock_stability._exceptions import DomainError
from td_clock_stability._exceptions import NearSingularityError
from td_clock_stability._exceptions import NumericalInconsistencyError
from td_clock_stability.core.config import Tolerances
from td_clock_stability.models.instance_models import StabilityInstance
from td_clock_stability.services import stability
from td_clock_stability.services.counterexample import alpha_of
from td_clock_stability.services.counterexample import build_family
from td_clock_stability.services.counterexample import family_instance
from td_clock_stability.services.polyalg import char_poly
from td_clock_stability.services.polyalg import hurwitz_minors
from td_clock_stability.services.polyalg import matrix_eigenvalues
from td_clock_stability.services.stability import HurwitzFamily
from td_clock_stability.services.stability import build_A
from td_clock_stability.services.stability import build_discounted_matrix
from td_clock_stability.services.stability import build_L
from td_clock_stability.services.stability import build_local_clock_matrix
from td_clock_stability.services.stability import coefficient_lines
from td_clock_stability.services.stability import eigen_trajectory
from td_clock_stability.services.stability import eta_star
from td_clock_stability.services.stability import finite_difference_derivative
from td_clock_stability.services.stability import g_eval
from td_clock_stability.services.stability import hurwitz_family
from td_clock_stability.services.stability import hurwitz_signs_at
from td_clock_stability.services.stability import is_positive_stable
from td_clock_stability.services.stability import lemma_spectrum_check
from td_clock_stability.services.stability import local_clock_check
from td_clock_stability.services.stability import nonsingularity_check
from td_clock_stability.services.stability import region_from_family
from td_clock_stability.services.stability import stability_region
from td_clock_stability.services.stability import zero_eig_derivative


def _positive_stable_by_eigenvalues(A) -> bool:
    return bool(np.all(np.linalg.eigvals(A).real > 0))


class TestBuilders:
    def test_L_annihilates_e(self, three_state):
        np.testing.assert_allclose(build_L(three_state) @ np.ones(3), 0.0, atol=1e-15)

    def test_A_at_zero_is_L(self, three_state):
        np.testing.assert_array_equal(build_A(three_state, 0.0), build_L(three_state))

    def test_A_rank_one_term(self, three_state):
        difference = build_A(three_state, 0.7) - build_L(three_state)
        np.testing.assert_allclose(difference, 0.7 * np.outer(three_state.d_mu, np.ones(3)), atol=1e-15)

    def test_negative_eta(self, three_state):
        with pytest.raises(DomainError):
            build_A(three_state, -1.0)

    def test_local_clock_matrix(self, three_state):
        M = build_local_clock_matrix(three_state, 0.5)
        np.testing.assert_allclose(M @ np.ones(3), 1.5 * np.ones(3), atol=1e-15)

    def test_discounted_clocks(self, three_state):
        local = build_discounted_matrix(three_state, 0.9, clock="local")
        global_ = build_discounted_matrix(three_state, 0.9)
        np.testing.assert_allclose(global_, np.diag(three_state.d_mu) @ local, atol=1e-15)

    @pytest.mark.parametrize("gamma", [-0.1, 1.0])
    def test_discount_out_of_range(self, three_state, gamma):
        with pytest.raises(DomainError):
            build_discounted_matrix(three_state, gamma)


class TestSpectrumLemma:
    def test_random_instances(self, random_instance):
        for k in range(100):
            inst = random_instance(2 + k % 9, normalized=bool(k % 2))
            report = lemma_spectrum_check(inst)
            assert report.min_real_part >= -report.tol
            assert report.worst_disk_margin >= -report.tol
            assert report.kernel_vector_alignment == pytest.approx(1.0, abs=1e-9)

    def test_family(self, instance23):
        report = lemma_spectrum_check(instance23)
        assert report.kernel_modulus <= 1e-9
        assert report.max_d_mu == pytest.approx(526.0 / 550.0)

    def test_single_state(self, single_state):
        report = lemma_spectrum_check(single_state)
        assert report.eigenvalues.size == 1


class TestEtaStar:
    def test_family_m23(self, instance23):
        result = eta_star(instance23)
        assert result.eta_star == pytest.approx(1.0 / 550.0, abs=1e-6)
        assert all(w.residual <= 1e-7 for w in result.witnesses)

    def test_family_m24(self):
        result = eta_star(family_instance(build_family(24)))
        assert result.eta_star == pytest.approx(1.0 / 299.0, abs=1e-6)

    def test_crossing_frequency(self, instance23, family23):
        result = eta_star(instance23)
        first = result.witnesses[0]
        assert first.omega / family23.alpha == pytest.approx(math.sqrt(6.0), rel=1e-4)

    def test_single_state_never_crosses(self, single_state):
        result = eta_star(single_state)
        assert result.is_infinite
        assert result.witnesses == []

    def test_witnesses_solve_the_crossing_equation(self, instance23):
        for witness in eta_star(instance23).witnesses:
            g = g_eval(instance23, 1j * witness.omega)
            assert abs(1.0 - witness.eta * g) <= 1e-7

    def test_stable_below_the_threshold(self, instance23):
        value = eta_star(instance23).eta_star
        for eta in np.geomspace(1e-3 * value, 0.99 * value, 20):
            assert is_positive_stable(build_A(instance23, eta))

    def test_bad_grid(self, three_state):
        with pytest.raises(DomainError):
            eta_star(three_state, grid=1)

    def test_g_at_the_spectrum(self, three_state):
        with pytest.raises(NearSingularityError):
            g_eval(three_state, 0.0)


class TestPositiveStability:
    def test_diagonal(self):
        assert is_positive_stable(np.diag([1.0, 2.0]))
        assert not is_positive_stable(-np.eye(2))

    @pytest.mark.parametrize("ratio, expected", [(0.5, True), (2.0, False), (4.0, True)])
    def test_family(self, instance23, family23, ratio, expected):
        assert is_positive_stable(build_A(instance23, ratio * family23.alpha)) is expected

    def test_signs_match_eigenvalues(self, instance23, family23):
        for ratio in (0.5, 2.0, 4.0):
            signs = hurwitz_signs_at(instance23, ratio * family23.alpha)
            assert bool(np.all(signs > 0)) == _positive_stable_by_eigenvalues(build_A(instance23, ratio * family23.alpha))

    def test_nonsingular_for_positive_eta(self, instance23, family23):
        assert nonsingularity_check(instance23, 2.0 * family23.alpha)

    def test_singular_at_zero(self, three_state):
        assert not nonsingularity_check(three_state, 0.0)

    def test_agrees_with_eigenvalues_on_random_instances(self, random_instance, rng):
        checked = 0
        for k in range(200):
            inst = random_instance(2 + k % 7, normalized=bool(k % 2))
            A = build_A(inst, float(np.exp(rng.uniform(np.log(1e-2), np.log(10.0)))))
            if np.min(np.abs(np.linalg.eigvals(A).real)) <= 1e-7:
                continue
            assert is_positive_stable(A) == _positive_stable_by_eigenvalues(A)
            checked += 1
        assert checked >= 150

    def test_coefficient_lines(self, three_state):
        lines = coefficient_lines(three_state)
        expected = char_poly(-build_A(three_state, 0.3)).coeffs[1:]
        np.testing.assert_allclose([a + 0.3 * b for a, b in lines], expected, rtol=1e-10, atol=1e-12)

    def test_local_clock_stays_stable(self, instance23, family23):
        alpha = family23.alpha
        assert local_clock_check(instance23, [0.5 * alpha, 2.0 * alpha, 10.0 * alpha])

    def test_unconfirmed_precision_is_numerical_inconsistency(self, rng):
        A = rng.standard_normal((4, 4)) + 5.0 * np.eye(4)
        with pytest.raises(NumericalInconsistencyError):
            is_positive_stable(A, Tolerances(MAX_DIGITS=50, AGREEMENT=1e-300))

    def test_hurwitz_verdict_must_match_clear_eigenvalues(self, monkeypatch):
        monkeypatch.setattr(stability, "_hurwitz_minors_of", lambda A, tolerances: [mpmath.mpf(-1)])
        with pytest.raises(NumericalInconsistencyError):
            is_positive_stable(np.diag([1.0, 2.0]))

    def test_family_on_both_sides_of_each_boundary(self, instance23, family23):
        for ratio, expected in ((0.99, True), (1.01, False), (2.99, False), (3.01, True)):
            assert is_positive_stable(build_A(instance23, ratio * family23.alpha)) is expected


class TestStabilityRegion:
    def test_family_m23(self, region23, family23):
        alpha = family23.alpha
        assert len(region23.intervals) == 2
        first, second = region23.intervals
        assert first.lo == 0.0
        assert first.hi == pytest.approx(alpha, abs=1e-9)
        assert second.lo == pytest.approx(3.0 * alpha, abs=1e-9)
        assert second.is_unbounded
        np.testing.assert_allclose(region23.boundary_roots, [alpha, 3.0 * alpha], atol=1e-9)
        assert region23.empty_reason is None

    def test_boundaries_are_sign_changes_of_a_determinant(self, region23, instance23):
        family = hurwitz_family(instance23)
        for root in region23.boundary_roots:
            below = family.signs(root * (1.0 - 1e-6))
            above = family.signs(root * (1.0 + 1e-6))
            assert np.any(below * above < 0)

    def test_membership(self, region23, family23):
        alpha = family23.alpha
        assert region23.contains(0.5 * alpha)
        assert not region23.contains(2.0 * alpha)
        assert region23.contains(4.0 * alpha)

    def test_agrees_with_eigenvalues(self, region23, instance23, family23, rng):
        alpha = family23.alpha
        for eta in alpha * np.exp(rng.uniform(math.log(1e-3), math.log(100.0), 40)):
            if min(abs(eta - root) for root in region23.boundary_roots) < 1e-6 * alpha:
                continue
            assert region23.contains(eta) == _positive_stable_by_eigenvalues(build_A(instance23, eta))

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_random_instances_against_eigenvalue_sampling(self, random_instance, n):
        for _ in range(5):
            inst = random_instance(n, normalized=True)
            region = stability_region(inst)
            cap = region.eta_cap
            for eta in np.geomspace(1e-4 * cap, 10.0 * cap, 60):
                A = build_A(inst, eta)
                if np.min(np.abs(np.linalg.eigvals(A).real)) <= 1e-9 * np.abs(A).max():
                    continue
                if any(abs(eta - root) <= 1e-6 * root for root in region.boundary_roots):
                    continue
                assert region.contains(eta) == _positive_stable_by_eigenvalues(A)

    def test_single_state_is_stable_everywhere(self, single_state):
        region = stability_region(single_state)
        assert len(region.intervals) == 1
        assert region.intervals[0].lo == 0.0
        assert region.intervals[0].is_unbounded

    def test_bad_cap(self, three_state):
        with pytest.raises(DomainError):
            stability_region(three_state, eta_cap=0.0)

    def test_identically_vanishing_determinant_gives_an_empty_region(self):
        # z^2 + (1 + eta): Delta_1 = a_1 = 0 for every eta
        region = region_from_family(HurwitzFamily([1, 0, 1], [0, 0, 1], 1.0, 50))
        assert region.is_empty
        assert region.empty_reason == "Delta_1(eta) vanishes identically: the stability region is empty"

    def test_no_stable_cell(self):
        # z^2 - z + eta: Delta_1 = -1 for every eta
        region = region_from_family(HurwitzFamily([1, -1, 0], [0, 0, 1], 1.0, 50))
        assert region.is_empty
        assert region.empty_reason == "no stable cell"

    def test_series_reproduce_the_minors(self, three_state):
        family = hurwitz_family(three_state, eta_cap=2.0)
        for eta in (0.3, 1.7, 5.0):
            with mpmath.workdps(family.digits):
                exact = hurwitz_minors(family.coefficients_at(mpmath.mpf(eta)), family.digits)
                for k, minor in enumerate(exact):
                    assert abs(family.value(k, eta) - minor) <= mpmath.mpf(10) ** -15 * abs(minor)

    def test_family_stability_matches_eigenvalues(self, three_state):
        family = hurwitz_family(three_state)
        for eta in np.geomspace(1e-3, 10.0, 25) * family.eta_cap:
            assert family.is_stable(eta) == _positive_stable_by_eigenvalues(build_A(three_state, eta))


class TestDerivative:
    def test_closed_form_against_finite_differences(self, random_instance):
        for k in range(20):
            inst = random_instance(2 + k % 7)
            closed = zero_eig_derivative(inst)
            numeric = finite_difference_derivative(inst)
            assert abs(numeric - closed) <= 1e-3 * abs(closed)

    def test_uniform_weights(self, three_state):
        uniform = StabilityInstance(d_mu=np.full(3, 1.0 / 3.0), P_pi=three_state.P_pi)
        assert zero_eig_derivative(uniform) == pytest.approx(1.0)

    def test_family_is_positive(self, instance23):
        assert zero_eig_derivative(instance23) > 0

    def test_family_against_finite_differences(self, instance23):
        closed = zero_eig_derivative(instance23)
        assert abs(finite_difference_derivative(instance23, 1e-6) - closed) <= 1e-3 * abs(closed)


class TestEigenTrajectory:
    def test_shape_and_branches(self, instance23, family23):
        etas = family23.alpha * np.linspace(0.5, 4.0, 8)
        trajectory = eigen_trajectory(instance23, etas)
        assert trajectory.eigenvalues.shape == (8, instance23.n)
        for k, eta in enumerate(etas):
            np.testing.assert_allclose(np.sort_complex(trajectory.eigenvalues[k]), matrix_eigenvalues(build_A(instance23, eta)), atol=1e-10)

    def test_repeated_eigenvalues_are_trivial(self, instance23, family23):
        trajectory = eigen_trajectory(instance23, family23.alpha * np.array([0.5, 1.0, 2.0]))
        for row in trajectory.trivial:
            assert int(row.sum()) == family23.m - 1
        assert len(trajectory.nontrivial_branches()) >= 3

    @pytest.mark.parametrize("t, ordinate", [(1.0, math.sqrt(6.0)), (3.0, math.sqrt(12.0))])
    def test_imaginary_axis_crossings(self, instance23, family23, t, ordinate):
        scaled = matrix_eigenvalues(build_A(instance23, t * family23.alpha)) / family23.alpha
        assert np.min(np.abs(scaled - 1j * ordinate)) <= 1e-4
        assert np.min(np.abs(scaled + 1j * ordinate)) <= 1e-4

    def test_grid_must_increase(self, three_state):
        with pytest.raises(DomainError):
            eigen_trajectory(three_state, [0.2, 0.1])


def test_alpha_matches_the_family(family23):
    assert family23.alpha == alpha_of(23)
