"""
Filename: test_logger.py
Project: TD Clock Stability (TDCS)
Description: Log formatters, filters, run ids and the method logger
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import json
import logging
import sys

import numpy as np
import pytest

from td_clock_stability.logger.filters import AddContextualFieldFilter
from td_clock_stability.logger.filters import RunIdFilter
from td_clock_stability.logger.formatters import ConsoleFormatter
from td_clock_stability.logger.formatters import JSONFormatter
from td_clock_stability.logger.logger import configure_logging
from td_clock_stability.utils.method_logger import method_logger
from td_clock_stability.utils.run_context import get_run_id
from td_clock_stability.utils.run_context import run_scope


def _record(message: str = "hello %s", args=("world",), level: int = logging.INFO, exc_info=None, **extra) -> logging.LogRecord:
    record = logging.LogRecord("tdcs.test", level, __file__, 10, message, args, exc_info)
    record.__dict__.update(extra)
    return record


@method_logger("debug")
def scale(x, factor=2.0):
    return factor * x


class TestConsoleFormatter:
    def test_plain_message(self):
        text = ConsoleFormatter().format(_record())
        assert text.startswith("[INFO] -- ")
        assert text.endswith(":: hello world")

    def test_extras_and_application_name(self):
        text = ConsoleFormatter().format(_record(eta=0.5, application_name="TDCS"))
        assert "[TDCS] (test_logger." in text
        assert text.endswith("hello world [eta=0.5]")

    def test_decorated_method_location(self):
        record = _record(wrapped_module_name="experiment_service", wrapped_fn_name="stability_region")
        text = ConsoleFormatter().format(record)
        assert "(experiment_service.stability_region)" in text
        assert "wrapped_fn_name" not in text

    def test_stack_trace_is_appended(self):
        try:
            1 / 0
        except ZeroDivisionError:
            record = _record(level=logging.ERROR, exc_info=sys.exc_info())
        text = ConsoleFormatter().format(record)
        assert text.startswith("[ERROR]")
        assert "ZeroDivisionError" in text.splitlines()[-1]


class TestJSONFormatter:
    def test_fields(self):
        payload = json.loads(JSONFormatter().format(_record(eta=0.5)))
        assert payload["message"] == "hello world"
        assert payload["level"] == "INFO"
        assert payload["eta"] == 0.5
        assert payload["has_stacktrace"] is False
        assert "msg" not in payload and "args" not in payload

    def test_numpy_and_non_finite_extras(self):
        payload = json.loads(JSONFormatter().format(_record(roots=np.arange(3), eta_star=np.float64(np.inf), growth=np.nan)))
        assert payload["roots"] == [0, 1, 2]
        assert payload["eta_star"] == "inf"
        assert payload["growth"] == "nan"

    def test_large_arrays_are_logged_by_shape(self):
        payload = json.loads(JSONFormatter().format(_record(A=np.zeros((25, 25)))))
        assert payload["A"] == {"ndarray": [25, 25], "dtype": "float64"}

    def test_stack_trace(self):
        try:
            raise ValueError("bad row")
        except ValueError:
            record = _record(level=logging.ERROR, exc_info=sys.exc_info())
        payload = json.loads(JSONFormatter().format(record))
        assert payload["has_stacktrace"] is True
        assert "ValueError: bad row" in payload["stack_trace"]

    def test_decorated_method_location(self):
        payload = json.loads(JSONFormatter().format(_record(wrapped_module_name="td", wrapped_fn_name="run_td")))
        assert payload["module"] == "td"
        assert payload["funcName"] == "run_td"

    def test_pretty_print(self):
        assert "\n" in JSONFormatter(debug_out=True).format(_record())


class TestFilters:
    def test_contextual_field(self):
        record = _record()
        assert AddContextualFieldFilter("application_name", "TDCS").filter(record)
        assert record.application_name == "TDCS"

    def test_run_id_inside_a_scope(self):
        record = _record()
        with run_scope("run-1"):
            assert RunIdFilter().filter(record)
        assert record.run_id == "run-1"

    def test_no_run_id_outside_a_scope(self):
        record = _record()
        RunIdFilter().filter(record)
        assert "run_id" not in record.__dict__


class TestRunScope:
    def test_generated_ids(self):
        with run_scope() as run_id:
            assert get_run_id() == run_id
            assert len(run_id) == 36
        assert get_run_id() is None

    def test_nested_scopes_restore(self):
        with run_scope("outer"):
            with run_scope("inner"):
                assert get_run_id() == "inner"
            assert get_run_id() == "outer"


class TestMethodLogger:
    def test_logs_call_and_arguments(self, caplog):
        caplog.set_level(logging.DEBUG, logger="td_clock_stability.utils.method_logger")
        assert scale(3.0, factor=0.5) == 1.5
        record = caplog.records[-1]
        assert record.getMessage() == "scale called by test_logger"
        assert record.wrapped_fn_name == "scale"
        assert record.passed_args == [3.0]
        assert record.passed_kwargs == {"factor": 0.5}

    def test_silent_above_debug(self, caplog):
        caplog.set_level(logging.INFO, logger="td_clock_stability.utils.method_logger")
        scale(1.0)
        assert not [r for r in caplog.records if r.name == "td_clock_stability.utils.method_logger"]


@pytest.mark.usefixtures("restore_root_logging")
class TestConfigureLogging:
    def test_file_logging(self, tmp_path):
        logger = configure_logging("tdcs.test", "TDCS", level="DEBUG", log_format="json", log_dir=str(tmp_path))
        assert logging.getLogger().level == logging.DEBUG
        logger.error("boom", extra={"failure_reason": "DOMAIN_ERROR"})
        logger.info("progress")

        error_lines = (tmp_path / "error.log").read_text(encoding="utf-8").splitlines()
        assert len(error_lines) == 1
        payload = json.loads(error_lines[0])
        assert payload["message"] == "boom"
        assert payload["application_name"] == "TDCS"
        assert payload["failure_reason"] == "DOMAIN_ERROR"
        assert "progress" in (tmp_path / "info.log").read_text(encoding="utf-8")

    def test_second_call_only_changes_the_level(self, restore_root_logging):
        configure_logging("tdcs.test", "TDCS")
        count = len(restore_root_logging.handlers)
        configure_logging("tdcs.test", "TDCS", level="WARNING")
        assert len(restore_root_logging.handlers) == count
        assert restore_root_logging.level == logging.WARNING
