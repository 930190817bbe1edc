"""
Filename: mdp.py
Project: TD Clock Stability (TDCS)
Description: The two-action experiment MDP built on a stability instance, sampling and the
             transition matrices induced by target and behavior policies
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
from typing import Optional
from typing import Tuple
from typing import Union

import numpy as np

from td_clock_stability._exceptions import ConstructionError
from td_clock_stability._exceptions import DomainError
from td_clock_stability._exceptions import KappaBoundError
from td_clock_stability._exceptions import NumericalInconsistencyError
from td_clock_stability.core.config import DEFAULT_TOLERANCES
from td_clock_stability.core.config import Tolerances
from td_clock_stability.models.base_model import as_real_matrix
from td_clock_stability.models.base_model import as_real_vector
from td_clock_stability.models.counterexample_models import CounterexampleFamily
from td_clock_stability.models.instance_models import StabilityInstance
from td_clock_stability.models.mdp_models import PolicyPair
from td_clock_stability.models.mdp_models import TabularMDP
from td_clock_stability.schemas.td_schemas import StepSample
from td_clock_stability.utils.method_logger import method_logger

log = logging.getLogger(__name__)

ACTION_LABELS = ("a0", "a1")
IDENTITY_TOLERANCE = 1e-12


def _kappa_bound(P_pi: np.ndarray, d_mu: np.ndarray) -> Tuple[float, Tuple[int, int]]:
    """min over P_pi[i, j] > 0 of d_mu[j] / P_pi[i, j] and the entry attaining it"""
    with np.errstate(divide="ignore"):
        ratios = np.where(P_pi > 0, d_mu[None, :] / np.where(P_pi > 0, P_pi, 1.0), np.inf)
    i, j = np.unravel_index(np.argmin(ratios), ratios.shape)
    return float(ratios[i, j]), (int(i), int(j))


def kappa_max(P_pi, d_mu, tolerances: Optional[Tolerances] = None) -> float:
    """largest kappa keeping R = (e d_mu^T - kappa P_pi) / (1 - kappa) nonnegative, capped below 1"""
    tolerances = tolerances or DEFAULT_TOLERANCES
    P_pi = as_real_matrix(P_pi, "P_pi")
    d_mu = as_real_vector(d_mu, "d_mu")
    bound, entry = _kappa_bound(P_pi, d_mu)
    if not bound > 0:
        exception = ConstructionError("kappa_max", f"bound {bound} at P_pi entry {entry} is not positive")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return min(bound, tolerances.KAPPA_CAP)


def _instance_parts(source: Union[CounterexampleFamily, StabilityInstance]) -> Tuple[np.ndarray, np.ndarray, Tuple[str, ...]]:
    if isinstance(source, CounterexampleFamily):
        return source.d_mu, source.P_pi, source.labels
    labels = tuple(f"s_{i}" for i in range(source.n))
    return source.d_mu, source.P_pi, labels


def _auxiliary_kernel(d_mu: np.ndarray, P_pi: np.ndarray, kappa: float, kappa_limit: float, tolerances: Tolerances) -> np.ndarray:
    """R = (e d_mu^T - kappa P_pi) / (1 - kappa) with round-off negatives clamped"""
    n = d_mu.size
    R = (np.outer(np.ones(n), d_mu) - kappa * P_pi) / (1.0 - kappa)
    i, j = np.unravel_index(np.argmin(R), R.shape)
    if R[i, j] < -tolerances.NEGATIVE_CLAMP:
        exception = KappaBoundError(kappa, kappa_limit, (i, j))
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    R = np.where(R < 0, 0.0, R)
    return R / R.sum(axis=1, keepdims=True)


@method_logger("debug")
def build_experiment_mdp(
    source: Union[CounterexampleFamily, StabilityInstance],
    kappa: Optional[float] = None,
    tolerances: Optional[Tolerances] = None,
) -> Tuple[TabularMDP, PolicyPair]:
    """
    Action a0 moves by P_pi and action a1 by R. The target policy always plays a0, the behavior
    policy plays a0 with probability kappa, so the behavior chain is e d_mu^T and d_mu is its
    stationary distribution. Rewards are zero and the chain starts in the first state.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    d_mu, P_pi, labels = _instance_parts(source)
    n = d_mu.size
    if abs(float(d_mu.sum()) - 1.0) > IDENTITY_TOLERANCE:
        exception = DomainError("sum(d_mu)", float(d_mu.sum()), "d_mu must be a probability vector")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception

    limit = kappa_max(P_pi, d_mu, tolerances)
    kappa = min(limit, tolerances.KAPPA_DEFAULT) if kappa is None else float(kappa)
    if not 0.0 < kappa < 1.0:
        exception = DomainError("kappa", kappa, "0 < kappa < 1")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    R = _auxiliary_kernel(d_mu, P_pi, kappa, limit, tolerances)

    behavior = kappa * P_pi + (1.0 - kappa) * R
    gap = float(np.max(np.abs(behavior - np.outer(np.ones(n), d_mu))))
    if gap > IDENTITY_TOLERANCE:
        exception = NumericalInconsistencyError("kappa P_pi + (1 - kappa) R = e d_mu^T", gap, IDENTITY_TOLERANCE)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception

    transition = np.stack([P_pi, R], axis=1)
    initial = np.zeros(n)
    initial[0] = 1.0
    mdp = TabularMDP(transition=transition, reward=np.zeros((n, 2)), initial=initial, state_labels=labels, action_labels=ACTION_LABELS)
    policies = PolicyPair(pi=np.tile([1.0, 0.0], (n, 1)), mu=np.tile([kappa, 1.0 - kappa], (n, 1)))
    log.info(f"experiment MDP with {n} states, kappa={kappa:.17g} (kappa_max={limit:.17g})", extra={"kappa": kappa, "kappa_max": limit})
    return mdp, policies


def _draw(cdf: np.ndarray, u: float) -> int:
    return min(int(np.searchsorted(cdf, u, side="right")), cdf.size - 1)


def sample_step(mdp: TabularMDP, policies: PolicyPair, s: int, rng: np.random.Generator) -> StepSample:
    """A ~ mu(.|s) from one uniform, S' ~ p(.|s, A) from the next; the same draws the TD kernel makes"""
    a = _draw(np.cumsum(policies.mu[s]), rng.random())
    s_next = _draw(np.cumsum(mdp.transition[s, a]), rng.random())
    return StepSample(s=int(s), a=a, r=float(mdp.reward[s, a]), s_next=s_next, rho=float(policies.rho[s, a]))


def behavior_transition_matrix(mdp: TabularMDP, policies: PolicyPair) -> np.ndarray:
    """P_mu[s, s'] = sum_a mu(a|s) p(s'|s, a)"""
    return np.einsum("sa,sat->st", policies.mu, mdp.transition)


def target_transition_matrix(mdp: TabularMDP, policies: PolicyPair) -> np.ndarray:
    return np.einsum("sa,sat->st", policies.pi, mdp.transition)


def expected_reward_vector(mdp: TabularMDP, policies: PolicyPair) -> np.ndarray:
    """r_pi[s] = sum_a pi(a|s) r(s, a)"""
    return np.sum(policies.pi * mdp.reward, axis=1)


def importance_ratio_check(mdp: TabularMDP, policies: PolicyPair, s: int, samples: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Monte Carlo estimate of E_mu[rho 1{A = a} | s] for every action and its standard error. The
    estimate is unbiased for pi(a|s).
    """
    cdf = np.cumsum(policies.mu[s])
    actions = np.minimum(np.searchsorted(cdf, rng.random(samples), side="right"), mdp.n_actions - 1)
    weighted = policies.rho[s, actions][:, None] * (actions[:, None] == np.arange(mdp.n_actions)[None, :])
    return weighted.mean(axis=0), weighted.std(axis=0, ddof=1) / np.sqrt(samples)
