"""
Filename: method_logger.py
Project: TD Clock Stability (TDCS)
Description: Custom Decorator to log service functions, methods and inputs
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import inspect
import logging
from functools import wraps

from .serialization import serialize

log = logging.getLogger(__name__)


def _caller_name(func, args) -> str:
    # bound methods log their class, plain functions their module
    if args and "." in func.__qualname__ and not inspect.isclass(args[0]):
        return type(args[0]).__name__
    return func.__module__.split(".")[-1]


def method_logger(level):
    """simple decorator to log service calls and inputs"""

    def decorator(func):
        is_method = "." in func.__qualname__

        @wraps(func)
        def wrapper(*args, **kwargs):
            logger_fn = getattr(log, level)
            if log.isEnabledFor(logging.getLevelName(level.upper())):
                passed_args = args[1:] if is_method else args
                logger_fn(
                    f'{func.__name__} called by {_caller_name(func, args)}',
                    extra={
                        "passed_args": serialize(passed_args),
                        "passed_kwargs": serialize(kwargs),
                        # add these extras to signify decorated methods and correct logging
                        "wrapped_module_name": func.__module__.split(".")[-1],
                        "wrapped_fn_name": func.__name__,
                    },
                )
            return func(*args, **kwargs)

        return wrapper

    return decorator
