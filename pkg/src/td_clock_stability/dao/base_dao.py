"""
Filename: base_dao.py
Project: TD Clock Stability (TDCS)
Description: File-backed Data Access Object base: path resolution, atomic writes and reads
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import os
from pathlib import Path
from typing import List
from typing import Union

from td_clock_stability._exceptions import NotFound

log = logging.getLogger(__name__)


class BaseDao:
    """Base DAO class rooted at one directory; relative names resolve against it"""

    def __init__(self, root: Union[str, Path]):
        if root is None:
            raise ValueError("root must be defined")
        if not isinstance(root, (str, Path)):
            raise TypeError(f"Wrong type for root={type(root)}")
        self._root = Path(root)

    @property
    def root(self) -> Path:
        return self._root

    def _resolve(self, name: Union[str, Path]) -> Path:
        path = Path(name).expanduser()
        return path if path.is_absolute() else self._root / path

    def _write_text(self, path: Path, text: str) -> Path:
        """write through a temporary sibling so readers never see a partial file"""
        path.parent.mkdir(parents=True, exist_ok=True)
        temporary = path.with_name(f".{path.name}.{os.getpid()}.tmp")
        temporary.write_text(text, encoding="utf-8")
        temporary.replace(path)
        log.debug(f"wrote {path}", extra={"bytes": len(text)})
        return path

    def _read_text(self, path: Path) -> str:
        if not path.is_file():
            exception = NotFound(self, path)
            log.error(exception.message, extra={"failure_reason": exception.failure_reason})
            raise exception
        return path.read_text(encoding="utf-8")

    def _read_lines(self, path: Path) -> List[str]:
        return self._read_text(path).splitlines()
