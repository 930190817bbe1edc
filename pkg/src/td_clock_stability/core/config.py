"""
Filename: config.py
Project: TD Clock Stability (TDCS)
Description: Maintains all configurations for the application
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

from typing import Literal
from typing import Optional

from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import field_validator
from pydantic_settings import BaseSettings
from pydantic_settings import SettingsConfigDict


class Tolerances(BaseModel):
    """every numerical tolerance and budget of the package, in one place"""

    model_config = ConfigDict(frozen=True)

    # polyalg
    ROOT_MAX_ITER: int = Field(default=500, ge=10, description="Simultaneous-iteration budget of the root finder.")
    ROOT_RESIDUAL: float = Field(default=1e-10, gt=0, description="Residual target |p(z)| <= tol * (1 + max|a_j|).")
    ROOT_SEED: int = Field(default=20240611, description="Seed of the perturbed initial circle.")
    ROOT_CLUSTER: float = Field(default=1e-7, gt=0, description="Roots closer than this are reported as one root with multiplicity.")
    ROOT_MULTIPLE: float = Field(default=1e-3, gt=0, description="Relative radius of root groups tested as one multiple root.")
    EXTRA_DIGITS: int = Field(default=40, ge=16, description="Base decimal digits of extended-precision coefficient and minor work.")
    MAX_DIGITS: int = Field(default=1600, ge=50, description="Upper limit on working digits, estimated or doubled.")
    AGREEMENT: float = Field(default=1e-8, gt=0, description="Relative agreement of extended-precision results recomputed at twice the digits.")
    PIVOT: float = Field(default=1e-14, gt=0, description="Relative pivot magnitude below which elimination reports singularity.")
    STOCHASTIC_ROWS: float = Field(default=1e-12, gt=0, description="Row sums of stochastic matrices must be 1 within this.")
    STATIONARY_RESIDUAL: float = Field(default=1e-10, gt=0, description="Bound on ||d P - d||_inf for stationary distributions.")
    RANK_TOL: float = Field(default=1e-10, gt=0, description="Relative singular-value threshold for rank decisions.")
    EIGVEC_RESIDUAL: float = Field(default=1e-8, gt=0, description="Bound on ||Mv - lambda v|| for inverse iteration.")
    EIGVEC_MAX_ITER: int = Field(default=50, ge=1)
    # stability
    SPECTRUM: float = Field(default=1e-9, gt=0, description="Minimum distance from spec(L) for resolvent evaluation.")
    LEMMA: float = Field(default=1e-9, gt=0, description="Slack of the spectrum lemma checks.")
    HURWITZ_CROSSCHECK: float = Field(default=1e-6, gt=0, description="Relative eigenvalue margin above which the Hurwitz verdict must match the eigenvalues.")
    ETA_BISECTION: float = Field(default=1e-12, gt=0, description="Relative width at which omega bisection stops.")
    WITNESS_RESIDUAL: float = Field(default=1e-7, gt=0, description="Witness pairs satisfy |1 - eta g(i omega)| <= this.")
    LINEARITY: float = Field(default=1e-8, gt=0, description="Midpoint check of the coefficient lines.")
    NONSINGULAR: float = Field(default=1e-12, gt=0, description="|det A_eta| must exceed this times scale**n.")
    ROOT_MERGE: float = Field(default=1e-9, gt=0, description="Relative distance under which two eta roots are the same boundary.")
    REGION_SCAN_POINTS: int = Field(default=240, ge=16, description="Sign-scan density backing the interpolated determinant roots.")
    # counterexample
    BLOCK: float = Field(default=1e-8, gt=0, description="Eigenvalue matching tolerance of the block structure check.")
    CHAR_POLY_BLOCK: float = Field(default=1e-10, gt=0, description="Per-coefficient tolerance of the reduced block polynomial.")
    # mdp
    KAPPA_CAP: float = Field(default=1.0 - 1e-9, gt=0, lt=1)
    KAPPA_DEFAULT: float = Field(default=0.5, gt=0, lt=1)
    NEGATIVE_CLAMP: float = Field(default=1e-14, gt=0, description="Entries of R above -this are clamped to zero; below it construction fails.")
    # td
    OVERFLOW_CAP: float = Field(default=1e150, gt=0, description="Trajectory metrics are capped here and flagged as diverged.")
    CHECKPOINT_RATIO: float = Field(default=1.2, gt=1)
    RNG_CHUNK: int = Field(default=1 << 18, ge=1024, description="Uniform draws per host-side chunk fed to the TD kernel.")


DEFAULT_TOLERANCES = Tolerances()


class StabilitySettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="TDCS_", env_nested_delimiter="__", extra="ignore")

    PROFILE: str = "local"
    SERVICE_NAME: str = "td-clock-stability"
    SERVICE_ACRONYM: str = "tdcs"
    LOG_LEVEL: str = "INFO"
    LOG_OUTPUT_FORMAT: Literal["json", "console"] = "console"
    LOG_DIR: Optional[str] = None
    LOG_DEBUG_OUT: bool = False
    # Output Related Items
    OUTPUT_DIR: str = Field(default="output", description="Default directory for CSV, instance and plot outputs.")
    WORKERS: int = Field(default=1, ge=1, description="Worker processes for multi-seed simulation fan-out.")
    TOLERANCES: Tolerances = Tolerances()

    @field_validator("LOG_LEVEL", mode="before")
    def normalize_log_level(cls, v: str) -> str:
        level = str(v).upper()
        if level not in {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}:
            raise ValueError(f"LOG_LEVEL must be a standard logging level name, got {v}")
        return level
