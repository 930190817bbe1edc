"""
Filename: commands.py
Project: TD Clock Stability (TDCS)
Description: Command handlers: turn parsed arguments into a RunConfig, run it, map failures to exit codes
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import sys
from argparse import Namespace
from typing import Any
from typing import Dict
from typing import Optional
from typing import TextIO

from pydantic import ValidationError

from td_clock_stability._exceptions import EXIT_OK
from td_clock_stability._exceptions import EXIT_VALIDATION
from td_clock_stability._exceptions import BaseStabilityException
from td_clock_stability.core.config import StabilitySettings
from td_clock_stability.dao.results_dao import ResultsDAO
from td_clock_stability.schemas.run_schemas import ErrorData
from td_clock_stability.schemas.run_schemas import ErrorResponse
from td_clock_stability.schemas.run_schemas import RunConfig
from td_clock_stability.services.dependencies import get_experiment_service

logger = logging.getLogger(__name__)

# argparse destinations copied into RunConfig when given
CONFIG_FIELDS = (
    "eta",
    "eta_ratio",
    "eta_cap",
    "omega_max",
    "grid",
    "t_min",
    "t_max",
    "points",
    "verify_samples",
    "epsilon",
    "gamma",
    "kappa",
    "steps",
    "seeds",
    "clocks",
    "checkpoint_ratio",
    "workers",
    "figure",
    "output",
)
SCHEDULE_FIELDS = ("c", "n0", "beta")
FLAG_FIELDS = ("expected_update", "mdp", "materialize")


def _error_response(exit_code: int, failure_code: str, message: str) -> ErrorResponse:
    return ErrorResponse(exit_code=exit_code, data=ErrorData(failure_code=failure_code, failure_message=message))


def _report(response: ErrorResponse, stream: TextIO) -> int:
    logger.error(f"command failed: {response.data.failure_message}", extra={"error_response": response.model_dump()})
    stream.write(f"error [{response.data.failure_code}]: {response.data.failure_message}\n")
    return response.exit_code


def build_config(args: Namespace, settings: StabilitySettings) -> RunConfig:
    """RunConfig from parsed arguments; values not given on the command line keep their defaults"""
    from_result = getattr(args, "from_result", None)
    if from_result:
        config = ResultsDAO(root=".").read_csv(from_result).config
        if args.output_dir:
            config = RunConfig.model_validate({**config.model_dump(), "output_dir": args.output_dir})
        logger.info(f"re-running {config.command.value} from the header of {from_result}")
        return config

    values: Dict[str, Any] = {"command": args.command, "tolerances": settings.TOLERANCES, "workers": settings.WORKERS}
    values["output_dir"] = args.output_dir or settings.OUTPUT_DIR
    for field in CONFIG_FIELDS:
        value = getattr(args, field, None)
        if value is not None:
            values[field] = value
    for field in FLAG_FIELDS:
        if getattr(args, field, False):
            values[field] = True

    schedule = {field: getattr(args, field) for field in SCHEDULE_FIELDS if getattr(args, field, None) is not None}
    if schedule:
        values["schedule"] = schedule
    if getattr(args, "instance", None):
        values["source"] = {"instance": args.instance}
    elif getattr(args, "m", None) is not None or getattr(args, "family", None):
        values["source"] = {"family": {"family": args.family or "example1", "m": args.m if args.m is not None else 23}}
    return RunConfig.model_validate(values)


def execute(config: RunConfig, settings: StabilitySettings, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        logger.info(f"Called {config.command.value}", extra={"output_dir": config.output_dir})
        service = get_experiment_service(settings, config.output_dir)
        result = service.run(config)
    except BaseStabilityException as e:
        return _report(_error_response(e.exit_code, e.failure_reason, e.message), stderr)
    except ValidationError as e:
        return _report(_error_response(EXIT_VALIDATION, "VALIDATION_ERROR", str(e)), stderr)

    for line in result.summary:
        stdout.write(line + "\n")
    for path in result.outputs:
        logger.info(f"output: {path}")
    return EXIT_OK


def run_command(args: Namespace, settings: StabilitySettings, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    try:
        config = build_config(args, settings)
    except BaseStabilityException as e:
        return _report(_error_response(e.exit_code, e.failure_reason, e.message), stderr or sys.stderr)
    except ValidationError as e:
        return _report(_error_response(EXIT_VALIDATION, "VALIDATION_ERROR", str(e)), stderr or sys.stderr)
    return execute(config, settings, stdout, stderr)
