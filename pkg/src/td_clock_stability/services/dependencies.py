"""
Filename: dependencies.py
Project: TD Clock Stability (TDCS)
Description: Definitions and management for the application's dependencies
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import os
from typing import Optional

from td_clock_stability.core.config import StabilitySettings
from td_clock_stability.dao.instance_dao import InstanceDAO
from td_clock_stability.dao.results_dao import ResultsDAO
from td_clock_stability.services.experiment_service import ExperimentService

logger = logging.getLogger(__name__)


def get_settings() -> StabilitySettings:
    settings = StabilitySettings(_env_file=f"env/{os.getenv('PROFILE', 'local')}.env")
    return settings


def get_instance_dao(output_dir: str) -> InstanceDAO:
    return InstanceDAO(root=output_dir)


def get_results_dao(output_dir: str) -> ResultsDAO:
    return ResultsDAO(root=output_dir)


def get_experiment_service(settings: StabilitySettings, output_dir: Optional[str] = None) -> ExperimentService:
    output_dir = output_dir or settings.OUTPUT_DIR
    logger.debug(f"writing results below {output_dir}")
    return ExperimentService(instance_dao=get_instance_dao(output_dir), results_dao=get_results_dao(output_dir), settings=settings)
