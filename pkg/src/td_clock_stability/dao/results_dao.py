"""
Filename: results_dao.py
Project: TD Clock Stability (TDCS)
Description: CSV result files with a run-configuration header, and gnuplot script stubs
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import csv
import io
import logging
from pathlib import Path
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Union

import numpy as np
from pydantic import ValidationError

from td_clock_stability._exceptions import DimensionError
from td_clock_stability._exceptions import ResultFormatError
from td_clock_stability.dao.base_dao import BaseDao
from td_clock_stability.schemas.run_schemas import HEADER_PREFIX
from td_clock_stability.schemas.run_schemas import VERSION
from td_clock_stability.schemas.run_schemas import ResultTable
from td_clock_stability.schemas.run_schemas import RunConfig
from td_clock_stability.utils.method_logger import method_logger
from td_clock_stability.utils.serialization import format_float

log = logging.getLogger(__name__)

BANNER = f"# tdcs {VERSION}"


def format_cell(value: Any) -> str:
    """floats with 17 significant digits, booleans as 0/1"""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    return str(value)


class ResultsDAO(BaseDao):
    def __init__(self, root: Union[str, Path]):
        super().__init__(root)

    def write_csv(
        self,
        name: Union[str, Path],
        config: RunConfig,
        columns: Sequence[str],
        rows: Sequence[Sequence[Any]],
        notes: Optional[Dict[str, Any]] = None,
    ) -> Path:
        """
        Header: a banner, the run configuration as one JSON line and optional "# key: value" notes,
        then the column names and the rows.
        """
        buffer = io.StringIO()
        buffer.write(BANNER + "\n")
        buffer.write(config.to_header() + "\n")
        for key, value in (notes or {}).items():
            buffer.write(f"# {key}: {format_cell(value)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                exception = DimensionError(f"CSV row for {len(columns)} columns", (len(row),))
                log.error(exception.message, extra={"failure_reason": exception.failure_reason})
                raise exception
            writer.writerow([format_cell(value) for value in row])
        path = self._write_text(self._resolve(name), buffer.getvalue())
        log.info(f"wrote {len(rows)} rows to {path}", extra={"command": config.command.value, "columns": list(columns)})
        return path

    @method_logger("info")
    def read_csv(self, name: Union[str, Path]) -> ResultTable:
        path = self._resolve(name)
        lines = self._read_lines(path)
        header = [line for line in lines if line.startswith("#")]
        body = [line for line in lines if line and not line.startswith("#")]
        if not header or header[0] != BANNER:
            exception = ResultFormatError(path, f"first line must be '{BANNER}'")
            log.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        if not body:
            exception = ResultFormatError(path, "no column header")
            log.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        try:
            config = RunConfig.from_header("\n".join(header))
        except (ValueError, ValidationError) as error:
            exception = ResultFormatError(path, f"unreadable run configuration: {error}")
            log.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception

        notes = {}
        for line in header[1:]:
            if line.startswith(HEADER_PREFIX):
                continue
            key, _, value = line[2:].partition(": ")
            notes[key] = value
        table = list(csv.reader(body))
        return ResultTable(config=config, notes=notes, columns=table[0], rows=table[1:])

    @method_logger("info")
    def write_plot_stub(self, name: Union[str, Path], title: str, plots: List[str]) -> Path:
        """gnuplot script; each entry of plots is one 'plot' clause list written as is"""
        lines = [
            "# gnuplot script stub written by td-clock-stability",
            "set datafile separator ','",
            "set datafile commentschars '#'",
            "set key autotitle columnhead",
            f"set title '{title}'",
            "set grid",
        ]
        lines += plots
        return self._write_text(self._resolve(name), "\n".join(lines) + "\n")
