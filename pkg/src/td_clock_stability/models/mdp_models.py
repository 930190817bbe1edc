"""
Filename: mdp_models.py
Project: TD Clock Stability (TDCS)
Description: Tabular MDP and target/behavior policy pair
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

from __future__ import annotations

import logging
from typing import Optional
from typing import Tuple

import numpy as np
from pydantic import field_validator
from pydantic import model_validator

from td_clock_stability._exceptions import DimensionError
from td_clock_stability._exceptions import StructureError
from td_clock_stability.core.config import DEFAULT_TOLERANCES
from td_clock_stability.models.base_model import GenericBaseModel

logger = logging.getLogger(__name__)


def _dimension_error(what: str, shape) -> DimensionError:
    exception = DimensionError(what, shape)
    logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
    return exception


def _as_finite(value, what: str, ndim: int) -> np.ndarray:
    array = np.array(value, dtype=float, copy=True)
    if array.ndim != ndim or 0 in array.shape:
        raise _dimension_error(what, array.shape)
    if not np.all(np.isfinite(array)):
        exception = StructureError(f"{what} has non-finite entries")
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    array.setflags(write=False)
    return array


def _check_distribution_rows(table: np.ndarray, what: str) -> None:
    if np.any(table < 0):
        exception = StructureError(f"{what} has negative entries")
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    error = np.abs(table.sum(axis=-1) - 1.0)
    if np.any(error > DEFAULT_TOLERANCES.STOCHASTIC_ROWS):
        index = tuple(int(i) for i in np.unravel_index(np.argmax(error), error.shape))
        exception = StructureError(f"{what} at {index} sums to {1.0 + float(error[index]):.17g}, not 1")
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception


class TabularMDP(GenericBaseModel):
    """transition[s, a, s'] = p(s'|s, a); reward[s, a] = r(s, a)"""

    transition: np.ndarray
    reward: np.ndarray
    initial: np.ndarray
    state_labels: Optional[Tuple[str, ...]] = None
    action_labels: Optional[Tuple[str, ...]] = None

    @field_validator("transition", mode="before")
    def validate_transition(cls, v) -> np.ndarray:
        transition = _as_finite(v, "transition", 3)
        if transition.shape[0] != transition.shape[2]:
            raise _dimension_error("transition", transition.shape)
        _check_distribution_rows(transition, "transition p(.|s,a)")
        return transition

    @field_validator("reward", mode="before")
    def validate_reward(cls, v) -> np.ndarray:
        return _as_finite(v, "reward", 2)

    @field_validator("initial", mode="before")
    def validate_initial(cls, v) -> np.ndarray:
        initial = _as_finite(v, "initial", 1)
        _check_distribution_rows(initial, "initial distribution")
        return initial

    @model_validator(mode="after")
    def validate_shapes(self) -> TabularMDP:
        n_states, n_actions, _ = self.transition.shape
        if self.reward.shape != (n_states, n_actions):
            raise _dimension_error(f"reward for {n_states} states x {n_actions} actions", self.reward.shape)
        if self.initial.shape != (n_states,):
            raise _dimension_error(f"initial for {n_states} states", self.initial.shape)
        if self.state_labels is not None and len(self.state_labels) != n_states:
            raise _dimension_error("state_labels", (len(self.state_labels),))
        if self.action_labels is not None and len(self.action_labels) != n_actions:
            raise _dimension_error("action_labels", (len(self.action_labels),))
        return self

    @property
    def n_states(self) -> int:
        return self.transition.shape[0]

    @property
    def n_actions(self) -> int:
        return self.transition.shape[1]


class PolicyPair(GenericBaseModel):
    """pi[s, a] target, mu[s, a] behavior, rho[s, a] = pi/mu (0 where mu = 0)"""

    pi: np.ndarray
    mu: np.ndarray
    rho: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def compute_rho(cls, data):
        if isinstance(data, dict) and data.get("rho") is None and "pi" in data and "mu" in data:
            pi = np.asarray(data["pi"], dtype=float)
            mu = np.asarray(data["mu"], dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                rho = np.where(mu > 0, pi / np.where(mu > 0, mu, 1.0), 0.0)
            data = {**data, "rho": rho}
        return data

    @field_validator("pi", "mu", "rho", mode="before")
    def validate_tables(cls, v, info) -> np.ndarray:
        return _as_finite(v, info.field_name, 2)

    @model_validator(mode="after")
    def validate_policies(self) -> PolicyPair:
        if self.pi.shape != self.mu.shape or self.rho.shape != self.mu.shape:
            raise _dimension_error("policy tables", (self.pi.shape, self.mu.shape, self.rho.shape))
        _check_distribution_rows(self.pi, "pi(.|s)")
        _check_distribution_rows(self.mu, "mu(.|s)")
        uncovered = (self.pi > 0) & (self.mu <= 0)
        if np.any(uncovered):
            s, a = np.argwhere(uncovered)[0]
            exception = StructureError(f"mu(a={a}|s={s}) = 0 while pi(a|s) > 0: pi is not absolutely continuous w.r.t. mu")
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        return self
