"""
Filename: run_context.py
Project: TD Clock Stability (TDCS)
Description: Run-scoped trace id shared by every log record of a command or simulation worker
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator
from typing import Optional
from uuid import uuid4

from .serialization import serialize

RUN_ID_VAR_NAME = "x-run-id"

_run_id_ctx_var: ContextVar[Optional[str]] = ContextVar(RUN_ID_VAR_NAME, default=None)


def new_run_id() -> str:
    return serialize(uuid4())


def get_run_id() -> Optional[str]:
    return _run_id_ctx_var.get()


@contextmanager
def run_scope(run_id: Optional[str] = None) -> Iterator[str]:
    """
    Tags every log record emitted inside the block with a run id.
    Nested scopes restore the outer id on exit.
    """
    token = _run_id_ctx_var.set(run_id or new_run_id())
    try:
        yield _run_id_ctx_var.get()
    finally:
        _run_id_ctx_var.reset(token)
