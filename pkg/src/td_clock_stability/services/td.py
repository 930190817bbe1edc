"""
Filename: td.py
Project: TD Clock Stability (TDCS)
Description: Discounted and differential TD under global and local learning-rate clocks, the
             expected-update surrogate and multi-seed fan-out
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import numpy as np

from td_clock_stability._exceptions import DimensionError
from td_clock_stability._exceptions import DomainError
from td_clock_stability.core.config import DEFAULT_TOLERANCES
from td_clock_stability.core.config import Tolerances
from td_clock_stability.models.base_model import as_real_matrix
from td_clock_stability.models.instance_models import StabilityInstance
from td_clock_stability.models.mdp_models import PolicyPair
from td_clock_stability.models.mdp_models import TabularMDP
from td_clock_stability.schemas.td_schemas import Checkpoint
from td_clock_stability.schemas.td_schemas import Clock
from td_clock_stability.schemas.td_schemas import DifferentialTD
from td_clock_stability.schemas.td_schemas import DiscountedTD
from td_clock_stability.schemas.td_schemas import LearningRateSchedule
from td_clock_stability.schemas.td_schemas import StepSample
from td_clock_stability.schemas.td_schemas import TDState
from td_clock_stability.schemas.td_schemas import TDTrajectory
from td_clock_stability.services.mdp import behavior_transition_matrix
from td_clock_stability.services.mdp import target_transition_matrix
from td_clock_stability.services.polyalg import eigvec_for_eigenvalue
from td_clock_stability.services.polyalg import matrix_eigenvalues
from td_clock_stability.services.polyalg import matrix_scale
from td_clock_stability.services.polyalg import stationary_distribution
from td_clock_stability.services.stability import build_A
from td_clock_stability.services.stability import build_discounted_matrix
from td_clock_stability.services.td_kernels import draw_index
from td_clock_stability.services.td_kernels import expected_segment
from td_clock_stability.services.td_kernels import td_segment
from td_clock_stability.utils.method_logger import method_logger
from td_clock_stability.utils.run_context import run_scope

log = logging.getLogger(__name__)

RNG_ALGORITHM = "numpy.random.Philox"

Algorithm = Union[DiscountedTD, DifferentialTD]


def lr(sched: LearningRateSchedule, n: int) -> float:
    """alpha_n = c / (n0 + n)^beta"""
    if n < 0:
        exception = DomainError("n", n, "n >= 0")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return sched.rate(n)


def _clock_index(state: TDState, s: int, sched: LearningRateSchedule) -> int:
    """n = t + 1 for the global clock, the visit count of s including this step for the local clock"""
    return int(state.visits[s]) + 1 if sched.clock == Clock.LOCAL else state.t + 1


def _advance(state: TDState, s: int, v: np.ndarray, J_hat: float) -> TDState:
    visits = state.visits.copy()
    visits[s] += 1
    return TDState(v=v, J_hat=J_hat, visits=visits, t=state.t + 1)


def differential_td_step(state: TDState, sample: StepSample, eta: float, sched: LearningRateSchedule) -> TDState:
    """
    delta = r - J_hat + v[s'] - v[s]; v[s] += alpha rho delta; J_hat += eta alpha rho delta.
    The local clock uses the same alpha for both updates.
    """
    s = sample.s
    step = lr(sched, _clock_index(state, s, sched))
    delta = sample.r - state.J_hat + state.v[sample.s_next] - state.v[s]
    increment = step * sample.rho * delta
    v = state.v.copy()
    v[s] = v[s] + increment
    return _advance(state, s, v, state.J_hat + eta * increment)


def discounted_td_step(state: TDState, sample: StepSample, gamma: float, sched: LearningRateSchedule) -> TDState:
    """delta = r + gamma v[s'] - v[s]; v[s] += alpha rho delta"""
    if not 0.0 <= gamma < 1.0:
        exception = DomainError("gamma", gamma, "0 <= gamma < 1")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    s = sample.s
    step = lr(sched, _clock_index(state, s, sched))
    delta = sample.r + gamma * state.v[sample.s_next] - state.v[s]
    v = state.v.copy()
    v[s] = v[s] + step * sample.rho * delta
    return _advance(state, s, v, state.J_hat)


def dist_to_span_e(v) -> float:
    """Euclidean distance from v to the constant vectors"""
    v = np.asarray(v, dtype=float)
    return float(np.linalg.norm(v - v.mean()))


def init_v0(A_eta, eta: float, tolerances: Optional[Tolerances] = None) -> Tuple[np.ndarray, float]:
    """
    Real part of the eigenvector of the eigenvalue with the smallest real part (ties: smallest
    |Im|, then position in the sorted spectrum), unit norm, largest-|entry| coordinate positive.
    J0 = eta e^T v0.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    A = as_real_matrix(A_eta, "A_eta")
    eigenvalues = matrix_eigenvalues(A)
    tie = 1e-12 * matrix_scale(A)
    candidates = np.flatnonzero(eigenvalues.real <= eigenvalues.real.min() + tie)
    candidates = candidates[np.abs(eigenvalues[candidates].imag) <= np.abs(eigenvalues[candidates].imag).min() + tie]
    lam = eigenvalues[candidates[0]]

    v0 = eigvec_for_eigenvalue(A, lam, tolerances).real.copy()
    v0 /= np.linalg.norm(v0)
    k = int(np.argmax(np.abs(v0)))
    if v0[k] < 0:
        v0 = -v0
    J0 = float(eta) * float(v0.sum())
    log.debug(f"v0 from eigenvalue {lam:.6e}", extra={"eta": eta, "J0": J0})
    return v0, J0


def geometric_checkpoints(steps: int, ratio: float) -> List[int]:
    """0, then rounded-up powers of ratio below steps, then steps"""
    if steps < 0:
        exception = DomainError("steps", steps, "steps >= 0")
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    times = {0, steps}
    power = 1.0
    while power < steps:
        times.add(int(math.ceil(power)))
        power *= ratio
    return sorted(t for t in times if t <= steps)


def _checkpoint(t: int, v: np.ndarray, J_hat: float, eta: float, diverged: bool) -> Checkpoint:
    return Checkpoint(
        t=t,
        norm_v=float(np.linalg.norm(v)),
        dist_e=dist_to_span_e(v),
        J_hat=J_hat,
        J_invariant=J_hat - eta * float(v.sum()),
        diverged=diverged,
    )


def _default_start(mdp: TabularMDP, policies: PolicyPair, algorithm: Algorithm, clock: Clock, tolerances: Tolerances) -> Tuple[np.ndarray, float]:
    """v0 from the ODE matrix of the run: A_eta for differential TD, the discounted matrix otherwise"""
    d_mu = stationary_distribution(behavior_transition_matrix(mdp, policies), tolerances)
    inst = StabilityInstance(d_mu=d_mu, P_pi=target_transition_matrix(mdp, policies))
    if isinstance(algorithm, DifferentialTD):
        return init_v0(build_A(inst, algorithm.eta), algorithm.eta, tolerances)
    v0, _ = init_v0(build_discounted_matrix(inst, algorithm.gamma, clock.value), 0.0, tolerances)
    return v0, 0.0


@method_logger("debug")
def run_td(
    mdp: TabularMDP,
    policies: PolicyPair,
    algorithm: Algorithm,
    sched: LearningRateSchedule,
    steps: int,
    seed: int,
    checkpoint_ratio: Optional[float] = None,
    v0: Optional[np.ndarray] = None,
    J0: Optional[float] = None,
    tolerances: Optional[Tolerances] = None,
) -> TDTrajectory:
    """
    Simulates one run with a Philox stream for the seed: one uniform picks S_0, then every step
    consumes one uniform for the action and one for the next state. Uniforms are drawn in chunks
    on the host; the trajectory does not depend on the chunk size.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    ratio = tolerances.CHECKPOINT_RATIO if checkpoint_ratio is None else float(checkpoint_ratio)
    differential = isinstance(algorithm, DifferentialTD)
    eta = algorithm.eta if differential else 0.0
    gamma = 0.0 if differential else algorithm.gamma

    if v0 is None:
        v0, default_J0 = _default_start(mdp, policies, algorithm, sched.clock, tolerances)
        J0 = default_J0 if J0 is None else J0
    v = np.array(v0, dtype=float, copy=True)
    if v.shape != (mdp.n_states,):
        exception = DimensionError(f"v0 for {mdp.n_states} states", v.shape)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    J_hat = float(eta * v.sum() if J0 is None else J0) if differential else 0.0

    rng = np.random.Generator(np.random.Philox(seed))
    s = int(draw_index(np.cumsum(mdp.initial), rng.random()))
    mu_cdf = np.ascontiguousarray(np.cumsum(policies.mu, axis=1))
    trans_cdf = np.ascontiguousarray(np.cumsum(mdp.transition, axis=2))
    reward = np.ascontiguousarray(mdp.reward)
    rho = np.ascontiguousarray(policies.rho)
    visits = np.zeros(mdp.n_states, dtype=np.int64)
    local_clock = sched.clock == Clock.LOCAL
    kernel_args = (mu_cdf, trans_cdf, reward, rho, differential, eta, gamma, local_clock, sched.c, sched.n0, sched.beta, tolerances.OVERFLOW_CAP)

    t, diverged = 0, False
    uniforms, offset = np.empty(0), 0
    checkpoints = [_checkpoint(0, v, J_hat, eta, diverged)]
    for target in geometric_checkpoints(steps, ratio)[1:]:
        while t < target:
            if offset >= uniforms.size:
                uniforms, offset = rng.random(tolerances.RNG_CHUNK - tolerances.RNG_CHUNK % 2), 0
            n_steps = min(target - t, (uniforms.size - offset) // 2)
            J_hat, s, t, diverged = td_segment(v, visits, J_hat, s, t, diverged, uniforms, offset, n_steps, *kernel_args)
            offset += 2 * n_steps
        checkpoints.append(_checkpoint(t, v, J_hat, eta, diverged))

    trajectory = TDTrajectory(
        checkpoints=checkpoints, algorithm=algorithm.kind, clock=sched.clock, seed=seed, steps=steps, rng=RNG_ALGORITHM
    )
    if trajectory.diverged:
        log.warning(f"run seed={seed} clock={sched.clock.value} hit the overflow cap", extra={"seed": seed, "clock": sched.clock.value})
    log.info(
        f"{algorithm.kind} TD, {sched.clock.value} clock, seed={seed}: dist_e {trajectory.initial.dist_e:.3e} -> {trajectory.final.dist_e:.3e} over {steps} steps",
        extra={"seed": seed, "clock": sched.clock.value, "steps": steps},
    )
    return trajectory


def expected_update_operator(
    inst: StabilityInstance, v, J_hat: float, eta: float, alpha: float, r_pi: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, float]:
    """
    One mean differential TD update with S ~ d_mu:
        v' = v + alpha D_mu (r_pi - J_hat e + P_pi v - v)
        J' = J_hat + alpha eta d_mu^T (r_pi - J_hat e + P_pi v - v)
    """
    v = np.asarray(v, dtype=float)
    r_pi = np.zeros(inst.n) if r_pi is None else np.asarray(r_pi, dtype=float)
    error = r_pi - J_hat + inst.P_pi @ v - v
    return v + alpha * inst.d_mu * error, J_hat + alpha * eta * float(inst.d_mu @ error)


@method_logger("debug")
def expected_update_run(
    inst: StabilityInstance,
    algorithm: Algorithm,
    sched: LearningRateSchedule,
    steps: int,
    v0: Optional[np.ndarray] = None,
    J0: Optional[float] = None,
    r_pi: Optional[np.ndarray] = None,
    checkpoint_ratio: Optional[float] = None,
    tolerances: Optional[Tolerances] = None,
) -> TDTrajectory:
    """
    The noiseless recursion behind TD with global-clock steps alpha_t = sched.rate(t + 1). For
    differential TD with zero rewards and J0 = eta e^T v0 it is v <- v - alpha_t A_eta v.
    """
    tolerances = tolerances or DEFAULT_TOLERANCES
    ratio = tolerances.CHECKPOINT_RATIO if checkpoint_ratio is None else float(checkpoint_ratio)
    differential = isinstance(algorithm, DifferentialTD)
    eta = algorithm.eta if differential else 0.0
    r_pi = np.zeros(inst.n) if r_pi is None else np.asarray(r_pi, dtype=float)
    D_r = inst.d_mu * r_pi

    if differential:
        K = build_A(inst, 0.0)
        if v0 is None:
            v0, J0 = init_v0(build_A(inst, eta), eta, tolerances)
    else:
        K = build_discounted_matrix(inst, algorithm.gamma)
        if v0 is None:
            v0, _ = init_v0(K, 0.0, tolerances)
    v = np.array(v0, dtype=float, copy=True)
    J_hat = float(eta * v.sum() if J0 is None else J0) if differential else 0.0
    K = np.ascontiguousarray(K)
    k_row = np.ascontiguousarray(K.sum(axis=0))
    d_sum, b_sum, cap = float(inst.d_mu.sum()), float(D_r.sum()), tolerances.OVERFLOW_CAP

    t, diverged = 0, False
    checkpoints = [_checkpoint(0, v, J_hat, eta, diverged)]
    for target in geometric_checkpoints(steps, ratio)[1:]:
        J_hat, t, hit = expected_segment(v, J_hat, K, inst.d_mu, k_row, d_sum, D_r, b_sum, differential, eta, t, target - t, sched.c, sched.n0, sched.beta, cap)
        diverged = diverged or hit
        checkpoints.append(_checkpoint(t, v, J_hat, eta, diverged))

    log.info(
        f"expected-update {algorithm.kind} run: dist_e {checkpoints[0].dist_e:.3e} -> {checkpoints[-1].dist_e:.3e} over {steps} iterations",
        extra={"instance": inst.name, "eta": eta},
    )
    return TDTrajectory(checkpoints=checkpoints, algorithm=f"expected-{algorithm.kind}", clock=Clock.GLOBAL, seed=None, steps=steps)


def _run_job(job) -> TDTrajectory:
    mdp, policies, algorithm, sched, steps, seed, checkpoint_ratio, v0, J0, tolerances, run_id = job
    with run_scope(f"{run_id}-{seed}-{sched.clock.value}"):
        return run_td(mdp, policies, algorithm, sched, steps, seed, checkpoint_ratio, v0, J0, tolerances)


@method_logger("debug")
def run_seeds(
    mdp: TabularMDP,
    policies: PolicyPair,
    algorithm: Algorithm,
    sched: LearningRateSchedule,
    steps: int,
    seeds: Sequence[int],
    clocks: Sequence[Clock] = (Clock.GLOBAL, Clock.LOCAL),
    workers: int = 1,
    checkpoint_ratio: Optional[float] = None,
    v0: Optional[np.ndarray] = None,
    J0: Optional[float] = None,
    tolerances: Optional[Tolerances] = None,
    run_id: str = "seeds",
) -> List[TDTrajectory]:
    """one trajectory per (seed, clock), seed-major; runs in worker processes when workers > 1"""
    tolerances = tolerances or DEFAULT_TOLERANCES
    if v0 is None:
        v0, default_J0 = _default_start(mdp, policies, algorithm, Clock.GLOBAL, tolerances)
        J0 = default_J0 if J0 is None else J0
    jobs = [
        (mdp, policies, algorithm, sched.with_clock(clock), steps, int(seed), checkpoint_ratio, v0, J0, tolerances, run_id)
        for seed in seeds
        for clock in clocks
    ]
    if workers <= 1 or len(jobs) <= 1:
        return [_run_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_run_job, jobs))
