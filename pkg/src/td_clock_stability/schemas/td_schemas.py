"""
Filename: td_schemas.py
Project: TD Clock Stability (TDCS)
Description: Learning-rate schedules, TD algorithm selectors, TD state and checkpointed trajectories
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import List
from typing import Literal
from typing import NamedTuple
from typing import Optional
from typing import Union

import numpy as np
from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import field_validator
from pydantic import model_validator

from td_clock_stability._exceptions import DomainError

log = logging.getLogger(__name__)


class Clock(str, Enum):
    GLOBAL = "global"
    LOCAL = "local"


class LearningRateSchedule(BaseModel):
    """alpha_n = c / (n0 + n)^beta; defaults are 0.45 / (1e4 + n)^0.6"""

    model_config = ConfigDict(frozen=True)

    c: float = Field(default=0.45, gt=0)
    n0: float = Field(default=1e4, ge=0)
    beta: float = Field(default=0.6, gt=0.5, le=1)
    clock: Clock = Clock.GLOBAL

    def rate(self, n: Union[int, np.ndarray]) -> Union[float, np.ndarray]:
        base = self.n0 + np.asarray(n, dtype=float)
        if np.any(base <= 0):
            exception = DomainError("n0 + n", float(np.min(base)), "n0 + n > 0")
            log.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        rate = self.c / base**self.beta
        return float(rate) if np.ndim(rate) == 0 else rate

    def with_clock(self, clock: Clock) -> LearningRateSchedule:
        return self.model_copy(update={"clock": Clock(clock)})


class DiscountedTD(BaseModel):
    kind: Literal["discounted"] = "discounted"
    gamma: float = Field(ge=0, lt=1)


class DifferentialTD(BaseModel):
    kind: Literal["differential"] = "differential"
    eta: float = Field(gt=0)


class StepSample(NamedTuple):
    s: int
    a: int
    r: float
    s_next: int
    rho: float


class TDState(BaseModel):
    """
    v and J_hat after t steps; visits[s] counts the steps i < t with S_i = s
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    v: np.ndarray
    J_hat: float = 0.0
    visits: np.ndarray
    t: int = Field(default=0, ge=0)

    @field_validator("v", mode="before")
    def validate_v(cls, v) -> np.ndarray:
        array = np.array(v, dtype=float, copy=True)
        if array.ndim != 1 or array.size == 0:
            raise ValueError(f"v must be a nonempty vector, got shape {array.shape}")
        return array

    @field_validator("visits", mode="before")
    def validate_visits(cls, v) -> np.ndarray:
        array = np.array(v, dtype=np.int64, copy=True)
        if array.ndim != 1 or np.any(array < 0):
            raise ValueError("visits must be a nonnegative integer vector")
        return array

    @model_validator(mode="after")
    def validate_counts(self) -> TDState:
        if self.visits.shape != self.v.shape:
            raise ValueError(f"visits shape {self.visits.shape} does not match v shape {self.v.shape}")
        if int(self.visits.sum()) != self.t:
            raise ValueError(f"visits sum to {int(self.visits.sum())}, expected t={self.t}")
        return self

    @classmethod
    def initial(cls, v0, J0: float = 0.0) -> TDState:
        v0 = np.asarray(v0, dtype=float)
        return cls(v=v0, J_hat=float(J0), visits=np.zeros(v0.size, dtype=np.int64), t=0)


class Checkpoint(BaseModel):
    t: int = Field(ge=0)
    norm_v: float
    dist_e: float
    J_hat: float
    J_invariant: float = 0.0
    diverged: bool = False


class TDTrajectory(BaseModel):
    """checkpoints of one run; J_invariant is J_hat - eta e^T v, conserved by differential TD"""

    checkpoints: List[Checkpoint]
    algorithm: str
    clock: Clock
    seed: Optional[int] = None
    steps: int = Field(ge=0)
    rng: Optional[str] = None

    @model_validator(mode="after")
    def validate_times(self) -> TDTrajectory:
        times = [checkpoint.t for checkpoint in self.checkpoints]
        if not times:
            raise ValueError("a trajectory has at least the t=0 checkpoint")
        if any(later <= earlier for earlier, later in zip(times, times[1:])):
            raise ValueError("checkpoint times must be strictly increasing")
        return self

    @property
    def initial(self) -> Checkpoint:
        return self.checkpoints[0]

    @property
    def final(self) -> Checkpoint:
        return self.checkpoints[-1]

    @property
    def diverged(self) -> bool:
        return any(checkpoint.diverged for checkpoint in self.checkpoints)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(checkpoint, name) for checkpoint in self.checkpoints], dtype=float)
