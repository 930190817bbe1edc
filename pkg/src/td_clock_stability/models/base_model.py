"""
Filename: base_model.py
Project: TD Clock Stability (TDCS)
Description: Base model and array coercion shared by every domain model
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

from __future__ import annotations

import logging
from typing import Any
from typing import Dict

import numpy as np
from pydantic import BaseModel
from pydantic import ConfigDict

from td_clock_stability._exceptions import DimensionError
from td_clock_stability._exceptions import DomainError
from td_clock_stability.utils.serialization import serialize

logger = logging.getLogger(__name__)


class GenericBaseModel(BaseModel):
    """immutable model carrying numpy arrays; arrays are made read-only on the way in"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    def to_dict(self) -> Dict[str, Any]:
        return serialize(self)


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def as_real_vector(value, what: str) -> np.ndarray:
    array = np.array(value, dtype=float, copy=True)
    if array.ndim != 1:
        exception = DimensionError(what, array.shape)
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    if not np.all(np.isfinite(array)):
        exception = DomainError(what, "non-finite entries", "finite entries")
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return _freeze(array)


def as_real_matrix(value, what: str) -> np.ndarray:
    """float64 copy of a square finite matrix"""
    array = np.array(value, dtype=float, copy=True)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
        exception = DimensionError(what, array.shape)
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    if not np.all(np.isfinite(array)):
        exception = DomainError(what, "non-finite entries", "finite entries")
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return _freeze(array)


def as_complex_array(value, what: str, ndim: int) -> np.ndarray:
    array = np.array(value, dtype=complex, copy=True)
    if array.ndim != ndim:
        exception = DimensionError(what, array.shape)
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    if not np.all(np.isfinite(array)):
        exception = DomainError(what, "non-finite entries", "finite entries")
        logger.error(exception.message, extra={"failure_reason": exception.failure_reason})
        raise exception
    return array
