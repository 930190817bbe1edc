"""
Filename: counterexample_models.py
Project: TD Clock Stability (TDCS)
Description: The m-parameterised counterexample family and its reduced 3x3 block
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Tuple

import numpy as np
from pydantic import Field
from pydantic import model_validator

from td_clock_stability._exceptions import ConstructionError
from td_clock_stability.core.config import DEFAULT_TOLERANCES
from td_clock_stability.models.base_model import GenericBaseModel
from td_clock_stability.models.instance_models import is_irreducible

logger = logging.getLogger(__name__)

SUM_TOLERANCE = 1e-15


def _fail(what: str, detail: str) -> None:
    exception = ConstructionError(what, detail)
    logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
    raise exception


class CounterexampleFamily(GenericBaseModel):
    """
    States are ordered (a_1, ..., a_m, b, c). Every invariant of the construction is
    checked when the model is built.
    """

    m: int = Field(gt=22)
    alpha: float
    d_mu: np.ndarray
    Q: np.ndarray
    P_pi: np.ndarray
    labels: Tuple[str, ...]

    @property
    def n(self) -> int:
        return self.m + 2

    @property
    def b(self) -> int:
        return self.m

    @property
    def c(self) -> int:
        return self.m + 1

    @model_validator(mode="after")
    def validate_construction(self) -> CounterexampleFamily:
        what = f"counterexample family m={self.m}"
        n = self.n
        if self.d_mu.shape != (n,) or self.Q.shape != (n, n) or self.P_pi.shape != (n, n) or len(self.labels) != n:
            _fail(what, f"shapes d_mu={self.d_mu.shape} Q={self.Q.shape} P_pi={self.P_pi.shape} labels={len(self.labels)}")
        if not self.alpha > 0:
            _fail(what, f"alpha={self.alpha} is not positive")
        d_c = self.d_mu[self.c]
        if not d_c > 0 or not d_c - self.alpha > 0:
            _fail(what, f"d_mu[c]={d_c} must exceed alpha={self.alpha} > 0")
        if abs(self.d_mu.sum() - 1.0) > SUM_TOLERANCE:
            _fail(what, f"sum(d_mu)={self.d_mu.sum():.17g}")
        for name, matrix in (("Q", self.Q), ("P_pi", self.P_pi)):
            if np.any(matrix < 0):
                _fail(what, f"{name} has negative entries")
            if np.max(np.abs(matrix.sum(axis=1) - 1.0)) > DEFAULT_TOLERANCES.STOCHASTIC_ROWS:
                _fail(what, f"{name} is not row-stochastic")
        if not is_irreducible(self.P_pi):
            _fail(what, "P_pi is reducible")
        if not self.P_pi[self.c, self.c] > 0:
            _fail(what, "P_pi[c, c] must be positive (aperiodicity)")
        return self


class ReducedBlock(GenericBaseModel):
    """M_t = C - t * d_bar r^T acting on the symmetric subspace U"""

    m: int
    t: float = Field(gt=0)
    d_bar: np.ndarray
    r: np.ndarray
    M_t: np.ndarray

    @property
    def expected_char_poly(self) -> np.ndarray:
        """z^3 - 1 + t (z^2 + z + 22)"""
        return np.array([1.0, self.t, self.t, 22.0 * self.t - 1.0])

    @property
    def hurwitz_coeffs(self) -> np.ndarray:
        """s^3 + (t+3) s^2 + (3t+3) s + 24t, the characteristic polynomial of -(I - M_t)"""
        t = self.t
        return np.array([1.0, t + 3.0, 3.0 * t + 3.0, 24.0 * t])


class FamilyConstants(GenericBaseModel):
    """exact rational constants of the family, kept apart from their float counterparts"""

    m: int
    alpha: Fraction
    d_c: Fraction
    d_c_minus_alpha: Fraction
    identity: Fraction

    @property
    def p_cc(self) -> Fraction:
        """P_pi[c, c] = 1 - alpha / d_c"""
        return 1 - self.alpha / self.d_c
