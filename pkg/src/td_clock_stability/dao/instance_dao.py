"""
Filename: instance_dao.py
Project: TD Clock Stability (TDCS)
Description: Line-oriented instance files: (d_mu, P_pi) matrices, family descriptors and experiment MDPs
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.

File layout, one record per line, numbers printed with 17 significant digits:

    # tdcs instance file v1
    kind matrices | family | mdp
    ...sections...
    end

matrices:  [name <label>]  n <n>  d_mu <row>  P_pi <n rows>
family:    family example1  m <m>
mdp:       states <n>  actions <k>  state_labels ...  action_labels ...
           transition <label> <n rows> (one block per action)  reward <n rows>  initial <row>
           pi <n rows>  mu <n rows>
"""

import logging
from pathlib import Path
from typing import Iterable
from typing import List
from typing import Optional
from typing import Tuple
from typing import Union

import numpy as np

from td_clock_stability._exceptions import BaseStabilityException
from td_clock_stability._exceptions import InstanceFormatError
from td_clock_stability.dao.base_dao import BaseDao
from td_clock_stability.models.instance_models import StabilityInstance
from td_clock_stability.models.mdp_models import PolicyPair
from td_clock_stability.models.mdp_models import TabularMDP
from td_clock_stability.schemas.run_schemas import FamilyDescriptor
from td_clock_stability.schemas.run_schemas import InstanceFile
from td_clock_stability.utils.method_logger import method_logger
from td_clock_stability.utils.serialization import format_float

log = logging.getLogger(__name__)

MAGIC = "# tdcs instance file v1"
KINDS = ("matrices", "family", "mdp")


def _row(values: Iterable[float]) -> str:
    return " ".join(format_float(float(x)) for x in values)


def _rows(matrix: np.ndarray) -> List[str]:
    return [_row(row) for row in np.atleast_2d(matrix)]


class _LineReader:
    """walks the significant lines of an instance file and reports failures with their line number"""

    def __init__(self, path: Path, lines: List[str]):
        self._path = path
        self._lines = [(i + 1, line.strip()) for i, line in enumerate(lines) if line.strip() and not line.strip().startswith("#")]
        self._position = 0
        self._last_line = len(lines)

    def fail(self, detail: str, line_no: Optional[int] = None) -> InstanceFormatError:
        if line_no is None:
            line_no = self._lines[self._position][0] if self._position < len(self._lines) else self._last_line
        exception = InstanceFormatError(self._path, line_no, detail)
        log.error(exception.message, extra={"failure_reason": exception.failure_reason})
        return exception

    def next(self) -> Tuple[int, List[str]]:
        if self._position >= len(self._lines):
            raise self.fail("unexpected end of file")
        line_no, text = self._lines[self._position]
        self._position += 1
        return line_no, text.split()

    def keyword(self, name: str, arity: Optional[int] = None) -> List[str]:
        line_no, tokens = self.next()
        if tokens[0] != name:
            raise self.fail(f"expected '{name}', found '{tokens[0]}'", line_no)
        if arity is not None and len(tokens) - 1 != arity:
            raise self.fail(f"'{name}' takes {arity} value(s), found {len(tokens) - 1}", line_no)
        return tokens[1:]

    def integer(self, name: str) -> int:
        value = self.keyword(name, 1)[0]
        try:
            return int(value)
        except ValueError:
            raise self.fail(f"'{name}' must be an integer, found '{value}'", self._lines[self._position - 1][0])

    def peek(self) -> Optional[str]:
        if self._position >= len(self._lines):
            return None
        return self._lines[self._position][1].split()[0]

    def floats(self, width: int) -> np.ndarray:
        line_no, tokens = self.next()
        if len(tokens) != width:
            raise self.fail(f"expected {width} numbers, found {len(tokens)}", line_no)
        try:
            return np.array([float(token) for token in tokens])
        except ValueError as error:
            raise self.fail(f"not a number: {error}", line_no)

    def matrix(self, rows: int, cols: int) -> np.ndarray:
        return np.vstack([self.floats(cols) for _ in range(rows)])

    def section(self, name: str, rows: int, cols: int) -> np.ndarray:
        self.keyword(name, 0)
        return self.matrix(rows, cols)

    def finish(self) -> None:
        self.keyword("end", 0)
        if self._position != len(self._lines):
            raise self.fail("content after 'end'")


class InstanceDAO(BaseDao):
    """reads and writes instance files below the output directory (absolute paths are used as given)"""

    def __init__(self, root: Union[str, Path]):
        super().__init__(root)

    def _write(self, name: Union[str, Path], kind: str, body: List[str]) -> Path:
        path = self._resolve(name)
        self._write_text(path, "\n".join([MAGIC, f"kind {kind}", *body, "end"]) + "\n")
        log.info(f"saved {kind} instance to {path}")
        return path

    @method_logger("info")
    def save_instance(self, name: Union[str, Path], instance: StabilityInstance) -> Path:
        body = [f"name {instance.name}"] if instance.name else []
        body += [f"n {instance.n}", "d_mu", _row(instance.d_mu), "P_pi", *_rows(instance.P_pi)]
        return self._write(name, "matrices", body)

    @method_logger("info")
    def save_family(self, name: Union[str, Path], family: FamilyDescriptor) -> Path:
        return self._write(name, "family", [f"family {family.family}", f"m {family.m}"])

    @method_logger("info")
    def save_mdp(self, name: Union[str, Path], mdp: TabularMDP, policies: PolicyPair) -> Path:
        n, k = mdp.n_states, mdp.n_actions
        state_labels = mdp.state_labels or tuple(f"s_{i}" for i in range(n))
        action_labels = mdp.action_labels or tuple(f"a{j}" for j in range(k))
        body = [f"states {n}", f"actions {k}", "state_labels " + " ".join(state_labels), "action_labels " + " ".join(action_labels)]
        for a, label in enumerate(action_labels):
            body += [f"transition {label}", *_rows(mdp.transition[:, a, :])]
        body += ["reward", *_rows(mdp.reward), "initial", _row(mdp.initial)]
        body += ["pi", *_rows(policies.pi), "mu", *_rows(policies.mu)]
        return self._write(name, "mdp", body)

    @method_logger("info")
    def load(self, name: Union[str, Path]) -> InstanceFile:
        path = self._resolve(name)
        lines = self._read_lines(path)
        reader = _LineReader(path, lines)
        if not lines or lines[0].strip() != MAGIC:
            raise reader.fail(f"first line must be '{MAGIC}'", 1)
        kind = reader.keyword("kind", 1)[0]
        if kind not in KINDS:
            raise reader.fail(f"unknown kind '{kind}', expected one of {', '.join(KINDS)}")
        try:
            if kind == "matrices":
                record = self._load_matrices(reader)
            elif kind == "family":
                record = self._load_family(reader)
            else:
                record = self._load_mdp(reader)
        except BaseStabilityException as error:
            if isinstance(error, InstanceFormatError):
                raise
            raise reader.fail(f"invalid {kind} instance: {error.message}", len(lines))
        except ValueError as error:
            raise reader.fail(f"invalid {kind} instance: {error}", len(lines))
        reader.finish()
        return record

    def _load_matrices(self, reader: _LineReader) -> InstanceFile:
        label = " ".join(reader.keyword("name")) if reader.peek() == "name" else None
        n = reader.integer("n")
        if n < 1:
            raise reader.fail(f"n must be positive, found {n}")
        d_mu = reader.section("d_mu", 1, n)[0]
        P_pi = reader.section("P_pi", n, n)
        return InstanceFile(kind="matrices", instance=StabilityInstance(d_mu=d_mu, P_pi=P_pi, name=label))

    def _load_family(self, reader: _LineReader) -> InstanceFile:
        family = reader.keyword("family", 1)[0]
        m = reader.integer("m")
        try:
            descriptor = FamilyDescriptor(family=family, m=m)
        except ValueError as error:
            raise reader.fail(f"invalid family descriptor: {error}")
        return InstanceFile(kind="family", family=descriptor)

    def _load_mdp(self, reader: _LineReader) -> InstanceFile:
        n = reader.integer("states")
        k = reader.integer("actions")
        if n < 1 or k < 1:
            raise reader.fail(f"states and actions must be positive, found {n} and {k}")
        state_labels = tuple(reader.keyword("state_labels", n))
        action_labels = tuple(reader.keyword("action_labels", k))
        transition = np.empty((n, k, n))
        for a, label in enumerate(action_labels):
            found = reader.keyword("transition", 1)[0]
            if found != label:
                raise reader.fail(f"expected the transition block of action '{label}', found '{found}'")
            transition[:, a, :] = reader.matrix(n, n)
        reward = reader.section("reward", n, k)
        initial = reader.section("initial", 1, n)[0]
        pi = reader.section("pi", n, k)
        mu = reader.section("mu", n, k)
        mdp = TabularMDP(transition=transition, reward=reward, initial=initial, state_labels=state_labels, action_labels=action_labels)
        return InstanceFile(kind="mdp", mdp=mdp, policies=PolicyPair(pi=pi, mu=mu))
