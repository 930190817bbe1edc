"""
Filename: stability_schemas.py
Project: TD Clock Stability (TDCS)
Description: Result records of the stability computations
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

from __future__ import annotations

import math
from typing import List
from typing import Optional

import numpy as np
from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import model_validator


class Interval(BaseModel):
    """open interval (lo, hi) of eta; hi may be inf"""

    lo: float = Field(ge=0)
    hi: float

    @model_validator(mode="after")
    def validate_bounds(self) -> Interval:
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got ({self.lo}, {self.hi})")
        return self

    @property
    def is_unbounded(self) -> bool:
        return math.isinf(self.hi)

    def contains(self, eta: float) -> bool:
        return self.lo < eta < self.hi


class StabilityRegion(BaseModel):
    intervals: List[Interval] = []
    boundary_roots: List[float] = []
    critical_roots: List[float] = []
    empty_reason: Optional[str] = None
    eta_cap: Optional[float] = None

    @model_validator(mode="after")
    def validate_region(self) -> StabilityRegion:
        for left, right in zip(self.intervals, self.intervals[1:]):
            if not left.hi <= right.lo:
                raise ValueError(f"intervals must be sorted and disjoint: ({left.lo}, {left.hi}) then ({right.lo}, {right.hi})")
        if any(root < 0 for root in self.boundary_roots + self.critical_roots):
            raise ValueError("boundary roots must be nonnegative")
        return self

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, eta: float) -> bool:
        return any(interval.contains(eta) for interval in self.intervals)


class Witness(BaseModel):
    """a crossing 1 - eta g(i omega) = 0"""

    omega: float = Field(gt=0)
    eta: float = Field(gt=0)
    residual: float = Field(ge=0)


class EtaStarResult(BaseModel):
    eta_star: float = Field(gt=0)
    witnesses: List[Witness] = []
    omega_min: float
    omega_max: float
    grid: int

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.eta_star)


class SpectrumReport(BaseModel):
    """outcome of the spectrum checks on L"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    eigenvalues: np.ndarray
    min_real_part: float
    max_d_mu: float
    worst_disk_margin: float
    kernel_modulus: float
    kernel_vector_alignment: float
    tol: float


class EigenTrajectory(BaseModel):
    """
    eigenvalues[k, i] is branch i at etas[k]; branches are continued across the grid by nearest
    matching, trivial[k, i] marks members of a repeated cluster
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    etas: np.ndarray
    eigenvalues: np.ndarray
    trivial: np.ndarray
    ambiguous: np.ndarray

    def nontrivial_branches(self) -> List[int]:
        return [i for i in range(self.eigenvalues.shape[1]) if not np.any(self.trivial[:, i])]


class BlockStructureReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    t: float
    eigenvalues: np.ndarray
    unit_cluster_size: int
    unit_cluster_radius: float
    block_eigenvalues: np.ndarray
    block_mismatch: float
    fixed_subspace_residual: float
