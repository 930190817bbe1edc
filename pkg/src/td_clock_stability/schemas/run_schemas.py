"""
Filename: run_schemas.py
Project: TD Clock Stability (TDCS)
Description: Command configuration records, instance file records and CLI error responses
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

from __future__ import annotations

from enum import Enum
from typing import Dict
from typing import List
from typing import Literal
from typing import Optional

import numpy as np
from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import model_validator

from td_clock_stability.core.config import Tolerances
from td_clock_stability.models.instance_models import StabilityInstance
from td_clock_stability.models.mdp_models import PolicyPair
from td_clock_stability.models.mdp_models import TabularMDP
from td_clock_stability.schemas.td_schemas import Clock
from td_clock_stability.schemas.td_schemas import LearningRateSchedule

HEADER_PREFIX = "# run_config: "
VERSION = "1.0.0"


class ErrorData(BaseModel):
    failure_code: str
    failure_message: str


class ErrorResponse(BaseModel):
    exit_code: int
    data: Optional[ErrorData]


class CommandName(str, Enum):
    STABILITY_REGION = "stability-region"
    ETA_STAR = "eta-star"
    EIGEN_TRAJECTORY = "eigen-trajectory"
    SIMULATE = "simulate"
    REPRODUCE = "reproduce"
    INSTANCE = "instance"
    LEMMA_CHECK = "lemma-check"
    DERIVATIVE = "derivative"


class Figure(str, Enum):
    FIG1 = "fig1"
    FIG2 = "fig2"
    APPENDIX_B = "appendixB"


class FamilyDescriptor(BaseModel):
    family: Literal["example1"] = "example1"
    m: int = Field(default=23, gt=22)


class InstanceSource(BaseModel):
    """an instance file path or a family descriptor; the m=23 family when neither is given"""

    instance: Optional[str] = None
    family: Optional[FamilyDescriptor] = None

    @model_validator(mode="after")
    def validate_choice(self) -> InstanceSource:
        if self.instance is not None and self.family is not None:
            raise ValueError("give either an instance file or a family descriptor, not both")
        if self.instance is None and self.family is None:
            self.family = FamilyDescriptor()
        return self


class InstanceFile(BaseModel):
    """contents of one instance file: matrices, a family descriptor, or an experiment MDP"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: Literal["matrices", "family", "mdp"]
    instance: Optional[StabilityInstance] = None
    family: Optional[FamilyDescriptor] = None
    mdp: Optional[TabularMDP] = None
    policies: Optional[PolicyPair] = None


class RunConfig(BaseModel):
    """every parameter of a command; embedded in output headers so a run can be repeated"""

    command: CommandName
    source: InstanceSource = InstanceSource()
    # stability
    eta: Optional[float] = Field(default=None, gt=0)
    eta_ratio: Optional[float] = Field(default=None, gt=0, description="eta in units of the family's alpha")
    eta_cap: Optional[float] = Field(default=None, gt=0)
    omega_max: Optional[float] = Field(default=None, gt=0)
    grid: int = Field(default=4000, ge=16)
    t_min: float = Field(default=0.05, gt=0)
    t_max: float = Field(default=4.0, gt=0)
    points: int = Field(default=200, ge=1)
    verify_samples: int = Field(default=0, ge=0)
    epsilon: float = Field(default=1e-6, gt=0)
    # simulation
    gamma: Optional[float] = Field(default=None, ge=0, lt=1)
    kappa: Optional[float] = Field(default=None, gt=0, lt=1)
    schedule: LearningRateSchedule = LearningRateSchedule()
    steps: int = Field(default=10_000_000, ge=0)
    seeds: List[int] = [0]
    clocks: List[Clock] = [Clock.GLOBAL, Clock.LOCAL]
    expected_update: bool = False
    checkpoint_ratio: float = Field(default=1.2, gt=1)
    workers: int = Field(default=1, ge=1)
    # outputs
    figure: Optional[Figure] = None
    mdp: bool = False
    materialize: bool = Field(default=False, description="write a family as its d_mu and P_pi matrices instead of the descriptor")
    output: Optional[str] = None
    output_dir: str = "output"
    tolerances: Tolerances = Tolerances()
    rng: str = "numpy.random.Philox"
    version: str = VERSION

    @model_validator(mode="after")
    def validate_ranges(self) -> RunConfig:
        if self.t_min >= self.t_max:
            raise ValueError(f"t_min={self.t_min} must be below t_max={self.t_max}")
        if self.eta is not None and self.eta_ratio is not None:
            raise ValueError("give either eta or eta_ratio")
        return self

    def to_header(self) -> str:
        return HEADER_PREFIX + self.model_dump_json()

    @classmethod
    def from_header(cls, text: str) -> RunConfig:
        for line in text.splitlines():
            if line.startswith(HEADER_PREFIX):
                return cls.model_validate_json(line[len(HEADER_PREFIX) :])
        raise ValueError("no run_config line in header")


class ResultTable(BaseModel):
    """a CSV result file read back: its run configuration, notes, column names and raw cells"""

    config: RunConfig
    notes: Dict[str, str] = {}
    columns: List[str]
    rows: List[List[str]]

    def column(self, name: str) -> np.ndarray:
        index = self.columns.index(name)
        return np.array([float(row[index]) for row in self.rows])


class CommandResult(BaseModel):
    """files written by a command and the summary lines printed on stdout"""

    command: CommandName
    outputs: List[str] = []
    summary: List[str] = []
