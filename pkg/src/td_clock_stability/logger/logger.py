"""
Filename: logger.py
Project: TD Clock Stability (TDCS)
Description: Custom Logger Implementation to handle all scenarios for the application
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import os
import sys
from traceback import TracebackException
from typing import Optional
from typing import Tuple

from .filters import AddContextualFieldFilter
from .filters import RunIdFilter
from .filters import _sanitize_stacktrace_for_json_fields
from .formatters import ConsoleFormatter
from .formatters import JSONFormatter

_HANDLER_MARKER = "_tdcs_handler"


def _uncaught_exception_logger(type: BaseException, exc: Exception, traceback: TracebackException):
    exception_string = _sanitize_stacktrace_for_json_fields(type, exc, traceback)
    # raise to root logger where it will be consumed by the formatter attached to our handler
    logging.getLogger().error(exception_string)


def enable_file_logging(log_dir_path: str) -> Tuple[logging.FileHandler, logging.FileHandler]:
    """
    Enable file logging to the dir specified by log_dir_path. If the log_dir doesn't exits
    the process will create it

    :params log_dir_path: The absolute path of the log dir
    """
    os.makedirs(log_dir_path, exist_ok=True)

    info_handler = logging.FileHandler(os.path.join(log_dir_path, "info.log"), mode="a")
    info_handler.setLevel(logging.INFO)

    error_handler = logging.FileHandler(os.path.join(log_dir_path, "error.log"), mode="a")
    error_handler.setLevel(logging.ERROR)

    return info_handler, error_handler


def configure_logging(
    logger_name: str,
    application_name: str,
    level: str = "INFO",
    log_format: str = "console",
    log_dir: Optional[str] = None,
    debug_out: bool = False,
) -> logging.Logger:
    """
    A function to setup logging

    :param logger_name: str, The name of the logger
    :param application_name: str, The name of the application. All logs will be tagged by this
    name for easier filtering
    :param level: str, default=INFO. The log level for the logger
    :param log_format: str, A possible value of "console" or "json". Default is console
    :param log_dir: str = None, The path of the log dir in case you want to enable file logging
    :param debug_out: bool = False, The logs are pretty printed in case of json logging
    """
    root_logger = logging.getLogger()
    if any(getattr(handler, _HANDLER_MARKER, False) for handler in root_logger.handlers):
        # this is a subsequent call
        root_logger.setLevel(level)
        return logging.getLogger(logger_name)

    # If its the first call; stderr keeps stdout free for command output
    handlers = [logging.StreamHandler(sys.stderr)]
    root_logger.setLevel(level)

    # If file logging required
    if log_dir:
        handlers.extend(enable_file_logging(log_dir))

    for handler in handlers:
        if log_format != "console":
            handler.setFormatter(JSONFormatter(debug_out=debug_out))
        else:
            handler.setFormatter(ConsoleFormatter())

        # Adds a marker for all log lines so its easier to filter in combined logs
        handler.addFilter(AddContextualFieldFilter("application_name", application_name))
        handler.addFilter(RunIdFilter())
        setattr(handler, _HANDLER_MARKER, True)
        root_logger.addHandler(handler)

    # For exceptions that were edge cases and not caught
    sys.excepthook = _uncaught_exception_logger

    return logging.getLogger(logger_name)
