"""
Filename: filters.py
Project: TD Clock Stability (TDCS)
Description: Logger Filters
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import traceback

from td_clock_stability.utils.run_context import get_run_id


class AddContextualFieldFilter(logging.Filter):
    def __init__(self, field_name: str, field_value: str) -> None:
        super().__init__()
        self._field_name = field_name
        self._field_value = field_value

    def filter(self, record: logging.LogRecord) -> bool:
        record.__dict__[self._field_name] = self._field_value
        return True


class RunIdFilter(logging.Filter):
    """stamps the active run id, if any, on the record"""

    def filter(self, record: logging.LogRecord) -> bool:
        run_id = get_run_id()
        if run_id is not None:
            record.__dict__["run_id"] = run_id
        return True


def _sanitize_stacktrace_for_json_fields(type, value, tb) -> str:
    # Sanitize it for our json formatting
    return "".join(traceback.format_exception(type, value, tb))
