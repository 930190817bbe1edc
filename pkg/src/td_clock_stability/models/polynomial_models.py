"""
Filename: polynomial_models.py
Project: TD Clock Stability (TDCS)
Description: Monic real polynomial used by every stability computation
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

from __future__ import annotations

import logging
from typing import Iterable
from typing import Union

import numpy as np
from pydantic import field_validator

from td_clock_stability._exceptions import DimensionError
from td_clock_stability._exceptions import DomainError
from td_clock_stability.models.base_model import GenericBaseModel
from td_clock_stability.models.base_model import as_real_vector

logger = logging.getLogger(__name__)


class RealPolynomial(GenericBaseModel):
    """
    z^n + a_1 z^(n-1) + ... + a_n, stored highest degree first as [1, a_1, ..., a_n].
    """

    coeffs: np.ndarray

    @field_validator("coeffs", mode="before")
    def validate_coeffs(cls, v) -> np.ndarray:
        coeffs = as_real_vector(v, "polynomial coefficients")
        if coeffs.size == 0:
            exception = DimensionError("polynomial coefficients", coeffs.shape)
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        if coeffs[0] != 1.0:
            exception = DomainError("leading coefficient", coeffs[0], "monic polynomial (exactly 1)")
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        return coeffs

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def coefficient(self, j: int) -> float:
        """a_j with a_0 = 1 and a_j = 0 outside 0..n"""
        if 0 <= j <= self.degree:
            return float(self.coeffs[j])
        return 0.0

    def evaluate(self, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        # np.polyval takes the highest degree first
        return np.polyval(self.coeffs, z)

    def derivative(self, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        if self.degree == 0:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return np.polyval(np.polyder(self.coeffs), z)

    def scaled(self, sigma: float) -> RealPolynomial:
        """
        p(sigma * s) / sigma^n: every root divided by sigma. For sigma > 0 the sign of every
        Hurwitz determinant is unchanged.
        """
        if not sigma > 0:
            exception = DomainError("sigma", sigma, "sigma > 0")
            logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        powers = float(sigma) ** -np.arange(self.coeffs.size, dtype=float)
        return RealPolynomial(coeffs=self.coeffs * powers)

    @classmethod
    def from_roots(cls, roots: Iterable[complex]) -> RealPolynomial:
        roots = np.asarray(list(roots), dtype=complex)
        coeffs = np.atleast_1d(np.poly(roots)) if roots.size else np.ones(1)
        return cls(coeffs=np.real(coeffs))

    def __repr__(self) -> str:
        return f"RealPolynomial(coeffs={self.coeffs.tolist()})"
