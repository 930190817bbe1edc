"""
Filename: instance_models.py
Project: TD Clock Stability (TDCS)
Description: The (d_mu, P_pi) pair behind every stability question
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
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from td_clock_stability._exceptions import DimensionError
from td_clock_stability._exceptions import DomainError
from td_clock_stability._exceptions import StructureError
from td_clock_stability.core.config import DEFAULT_TOLERANCES
from td_clock_stability.models.base_model import GenericBaseModel
from td_clock_stability.models.base_model import as_real_matrix
from td_clock_stability.models.base_model import as_real_vector

logger = logging.getLogger(__name__)


def strongly_connected_labels(P: np.ndarray) -> Tuple[int, np.ndarray]:
    """strongly connected components of the positivity pattern of P: (count, label per state)"""
    return connected_components(csr_matrix(P > 0), directed=True, connection="strong")


def is_irreducible(P: np.ndarray) -> bool:
    count, _ = strongly_connected_labels(P)
    return count == 1


def check_row_stochastic(P: np.ndarray, what: str, tol: float = DEFAULT_TOLERANCES.STOCHASTIC_ROWS) -> None:
    if np.any(P < 0):
        i, j = np.argwhere(P < 0)[0]
        exception = StructureError(f"{what} has a negative entry {P[i, j]} at ({i}, {j})")
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    row_error = np.abs(P.sum(axis=1) - 1.0)
    if np.any(row_error > tol):
        i = int(np.argmax(row_error))
        exception = StructureError(f"{what} row {i} sums to {P[i].sum():.17g}, not 1 within {tol:.1e}")
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception


class StabilityInstance(GenericBaseModel):
    """
    d_mu: positive state weights (need not sum to one unless normalized is set)
    P_pi: irreducible row-stochastic target transition matrix
    """

    d_mu: np.ndarray
    P_pi: np.ndarray
    normalized: bool = False
    name: Optional[str] = None

    @field_validator("d_mu", mode="before")
    def validate_d_mu(cls, v) -> np.ndarray:
        d_mu = as_real_vector(v, "d_mu")
        if d_mu.size == 0:
            exception = DimensionError("d_mu", d_mu.shape)
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        if np.any(d_mu <= 0):
            exception = DomainError("d_mu", float(d_mu.min()), "d_mu(s) > 0 for every state")
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        return d_mu

    @field_validator("P_pi", mode="before")
    def validate_P_pi(cls, v) -> np.ndarray:
        P_pi = as_real_matrix(v, "P_pi")
        check_row_stochastic(P_pi, "P_pi")
        count, labels = strongly_connected_labels(P_pi)
        if count != 1:
            exception = StructureError(f"P_pi is reducible: {count} communicating classes, state 0 reaches only states {np.flatnonzero(labels == labels[0]).tolist()} both ways")
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        return P_pi

    @model_validator(mode="after")
    def validate_shapes(self) -> StabilityInstance:
        if self.P_pi.shape[0] != self.d_mu.size:
            exception = DimensionError(f"P_pi for {self.d_mu.size} states", self.P_pi.shape)
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        if self.normalized and abs(self.d_mu.sum() - 1.0) > DEFAULT_TOLERANCES.STOCHASTIC_ROWS:
            exception = DomainError("sum(d_mu)", float(self.d_mu.sum()), "sum to 1 for a normalized instance")
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        return self

    @property
    def n(self) -> int:
        return self.d_mu.size

    @property
    def D_mu(self) -> np.ndarray:
        return np.diag(self.d_mu)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.P_pi.shape

    @classmethod
    def single_state(cls, d: float = 1.0) -> StabilityInstance:
        return cls(d_mu=[d], P_pi=[[1.0]], normalized=d == 1.0, name="single-state")
