"""
Filename: counterexample.py
Project: TD Clock Stability (TDCS)
Description: The m-state counterexample family: construction, exact constants, the reduced 3x3
             block on the symmetric subspace and the block structure of B_t
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import math
from fractions import Fraction
from typing import Optional
from typing import Tuple

import numpy as np

from td_clock_stability._exceptions import DomainError
from td_clock_stability._exceptions import NumericalInconsistencyError
from td_clock_stability.core.config import DEFAULT_TOLERANCES
from td_clock_stability.core.config import Tolerances
from td_clock_stability.models.counterexample_models import SUM_TOLERANCE
from td_clock_stability.models.counterexample_models import CounterexampleFamily
from td_clock_stability.models.counterexample_models import FamilyConstants
from td_clock_stability.models.counterexample_models import ReducedBlock
from td_clock_stability.models.instance_models import StabilityInstance
from td_clock_stability.models.polynomial_models import RealPolynomial
from td_clock_stability.schemas.stability_schemas import BlockStructureReport
from td_clock_stability.schemas.stability_schemas import Interval
from td_clock_stability.schemas.stability_schemas import StabilityRegion
from td_clock_stability.services.polyalg import char_poly
from td_clock_stability.services.polyalg import matrix_eigenvalues
from td_clock_stability.utils.method_logger import method_logger

log = logging.getLogger(__name__)

# the 3-cycle acting on (u_a, e_b, e_c)
CYCLE = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
IDENTITY_CONSTANT = 22


def _check_m(m) -> int:
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m <= IDENTITY_CONSTANT:
        exception = DomainError("m", m, f"integer m > {IDENTITY_CONSTANT}")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return int(m)


def _check_t(t: float) -> float:
    t = float(t)
    if not t > 0 or not math.isfinite(t):
        exception = DomainError("t", t, "0 < t < inf")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return t


def exact_constants(m: int) -> FamilyConstants:
    """alpha, d_mu[c], d_mu[c] - alpha and m - alpha (m^2 + m - 2) in rational arithmetic"""
    m = _check_m(m)
    denominator = m * m + m - 2
    alpha = Fraction(m - 22, denominator)
    d_c = 1 - (m + 1) * alpha
    return FamilyConstants(m=m, alpha=alpha, d_c=d_c, d_c_minus_alpha=d_c - alpha, identity=m - alpha * denominator)


def alpha_of(m: int) -> float:
    """alpha = (m - 22) / (m^2 + m - 2)"""
    return float(exact_constants(m).alpha)


def state_labels(m: int) -> Tuple[str, ...]:
    return tuple(f"a_{i}" for i in range(1, m + 1)) + ("b", "c")


@method_logger("debug")
def build_family(m: int) -> CounterexampleFamily:
    """
    States (a_1, ..., a_m, b, c). Q sends every a_i to b, b to c and c uniformly back to the a_i.
    d_mu puts alpha on every a_i and on b and the rest on c, and P_pi = I + alpha D_mu^{-1} (Q - I).
    """
    constants = exact_constants(m)
    m = constants.m
    n = m + 2
    b, c = m, m + 1
    alpha = float(constants.alpha)

    d_mu = np.full(n, alpha)
    d_mu[c] = float(constants.d_c)

    Q = np.zeros((n, n))
    Q[:m, b] = 1.0
    Q[b, c] = 1.0
    Q[c, :m] = 1.0 / m

    # rows of P_pi are convex combinations of e_s and Q[s, .] with weight alpha / d_mu[s]
    weight = alpha / d_mu
    P_pi = (1.0 - weight)[:, None] * np.eye(n) + weight[:, None] * Q

    family = CounterexampleFamily(m=m, alpha=alpha, d_mu=d_mu, Q=Q, P_pi=P_pi, labels=state_labels(m))
    if abs(d_mu[c] - float(constants.d_c)) > SUM_TOLERANCE or abs(P_pi[c, c] - float(constants.p_cc)) > SUM_TOLERANCE:
        exception = NumericalInconsistencyError(f"family m={m} against its exact constants", abs(P_pi[c, c] - float(constants.p_cc)), SUM_TOLERANCE)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    log.debug(f"built counterexample family m={m}, alpha={constants.alpha}, d_mu[c]={constants.d_c}")
    return family


def family_instance(fam: CounterexampleFamily) -> StabilityInstance:
    return StabilityInstance(d_mu=fam.d_mu, P_pi=fam.P_pi, normalized=True, name=f"example1-m{fam.m}")


def subspace_bases(fam: CounterexampleFamily) -> Tuple[np.ndarray, np.ndarray]:
    """
    Column bases of H = {x : x[b] = x[c] = 0, sum_i x[a_i] = 0}, which B_t fixes pointwise, and of
    the symmetric subspace U = span(u_a, e_b, e_c) with u_a the indicator of the a_i.
    """
    m, n = fam.m, fam.n
    H = np.zeros((n, m - 1))
    H[0, :] = 1.0
    H[np.arange(1, m), np.arange(m - 1)] = -1.0
    U = np.zeros((n, 3))
    U[:m, 0] = 1.0
    U[fam.b, 1] = 1.0
    U[fam.c, 2] = 1.0
    return H, U


def b_matrix(fam: CounterexampleFamily, t: float) -> np.ndarray:
    """B_t = I - Q + t d_mu e^T, so that A_{t alpha} = alpha B_t"""
    t = _check_t(t)
    return np.eye(fam.n) - fam.Q + t * np.outer(fam.d_mu, np.ones(fam.n))


def reduced_block(fam: CounterexampleFamily, t: float, tolerances: Optional[Tolerances] = None) -> ReducedBlock:
    """
    M_t = C - t d_bar r^T is Q - t d_mu e^T written in the basis (u_a, e_b, e_c) of U. Its
    characteristic polynomial z^3 - 1 + t (z^2 + z + 22) is checked coefficientwise.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    t = _check_t(t)
    m = fam.m
    d_bar = np.array([fam.alpha, fam.alpha, fam.d_mu[fam.c]])
    r = np.array([float(m), 1.0, 1.0])
    block = ReducedBlock(m=m, t=t, d_bar=d_bar, r=r, M_t=CYCLE - t * np.outer(d_bar, r))

    identity = m - fam.alpha * (m * m + m - 2)
    if abs(identity - IDENTITY_CONSTANT) > 1e-12:
        exception = NumericalInconsistencyError(f"m - alpha (m^2 + m - 2) = {IDENTITY_CONSTANT}", abs(identity - IDENTITY_CONSTANT), 1e-12)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception

    mismatch = float(np.max(np.abs(char_poly(block.M_t).coeffs - block.expected_char_poly)))
    if mismatch > tolerances.CHAR_POLY_BLOCK:
        exception = NumericalInconsistencyError(f"characteristic polynomial of M_t at t={t}", mismatch, tolerances.CHAR_POLY_BLOCK)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return block


def hurwitz_cubic(t: float) -> RealPolynomial:
    """s^3 + (t+3) s^2 + (3t+3) s + 24t; Hurwitz exactly when 3 (t - 1)(t - 3) > 0"""
    t = _check_t(t)
    return RealPolynomial(coeffs=[1.0, t + 3.0, 3.0 * t + 3.0, 24.0 * t])


def predicted_region(fam: CounterexampleFamily) -> StabilityRegion:
    """(0, alpha) U (3 alpha, inf)"""
    alpha = fam.alpha
    return StabilityRegion(
        intervals=[Interval(lo=0.0, hi=alpha), Interval(lo=3.0 * alpha, hi=math.inf)],
        boundary_roots=[alpha, 3.0 * alpha],
        critical_roots=[alpha, 3.0 * alpha],
    )


def _match(reference: np.ndarray, values: np.ndarray) -> float:
    """largest distance of a nearest-neighbour matching of reference into values"""
    remaining = list(values)
    worst = 0.0
    for target in reference:
        distances = np.abs(np.array(remaining) - target)
        j = int(np.argmin(distances))
        worst = max(worst, float(distances[j]))
        remaining.pop(j)
    return worst


@method_logger("debug")
def verify_block_structure(fam: CounterexampleFamily, t: float, tolerances: Optional[Tolerances] = None, seed: Optional[int] = None) -> BlockStructureReport:
    """
    spec(B_t) = {1 with multiplicity m - 1} U spec(I - M_t), and B_t x = x on H.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    B = b_matrix(fam, t)
    block = reduced_block(fam, t, tolerances)
    eigenvalues = matrix_eigenvalues(B)
    block_eigenvalues = matrix_eigenvalues(np.eye(3) - block.M_t)

    # m - 1 eigenvalues closest to 1 form the cluster, the rest must be spec(I - M_t)
    order = np.argsort(np.abs(eigenvalues - 1.0), kind="stable")
    cluster = eigenvalues[order[: fam.m - 1]]
    rest = eigenvalues[order[fam.m - 1 :]]
    radius = float(np.max(np.abs(cluster - 1.0)))
    mismatch = _match(block_eigenvalues, rest)

    rng = np.random.default_rng(tolerances.ROOT_SEED if seed is None else seed)
    H, _ = subspace_bases(fam)
    residual = 0.0
    for _ in range(3):
        x = H @ rng.standard_normal(fam.m - 1)
        residual = max(residual, float(np.max(np.abs(B @ x - x)) / np.max(np.abs(x))))

    for what, value in (("unit eigenvalue cluster radius", radius), ("reduced block eigenvalues", mismatch), ("B_t x = x on H", residual)):
        if value > tolerances.BLOCK:
            exception = NumericalInconsistencyError(f"{what} at m={fam.m}, t={t}", value, tolerances.BLOCK)
            log.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception

    unit_cluster_size = int(np.sum(np.abs(eigenvalues - 1.0) <= tolerances.BLOCK))
    return BlockStructureReport(
        t=block.t,
        eigenvalues=eigenvalues,
        unit_cluster_size=unit_cluster_size,
        unit_cluster_radius=radius,
        block_eigenvalues=block_eigenvalues,
        block_mismatch=mismatch,
        fixed_subspace_residual=residual,
    )
