"""
Filename: test_dao.py
Project: TD Clock Stability (TDCS)
Description: Instance files and CSV result files on disk
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import numpy as np
import pytest

from td_clock_stability._exceptions import DimensionError
from td_clock_stability._exceptions import InstanceFormatError
from td_clock_stability._exceptions import NotFound
from td_clock_stability._exceptions import ResultFormatError
from td_clock_stability.dao.base_dao import BaseDao
from td_clock_stability.dao.instance_dao import MAGIC
from td_clock_stability.dao.instance_dao import InstanceDAO
from td_clock_stability.dao.results_dao import BANNER
from td_clock_stability.dao.results_dao import ResultsDAO
from td_clock_stability.dao.results_dao import format_cell
from td_clock_stability.schemas.run_schemas import CommandName
from td_clock_stability.schemas.run_schemas import FamilyDescriptor
from td_clock_stability.schemas.run_schemas import RunConfig
from td_clock_stability.services.mdp import build_experiment_mdp


@pytest.fixture
def instance_dao(tmp_path) -> InstanceDAO:
    return InstanceDAO(root=tmp_path)


@pytest.fixture
def results_dao(tmp_path) -> ResultsDAO:
    return ResultsDAO(root=tmp_path)


def _write(tmp_path, name: str, lines) -> str:
    (tmp_path / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return name


class TestBaseDao:
    def test_root_is_required(self):
        with pytest.raises(ValueError):
            BaseDao(None)

    def test_root_type(self):
        with pytest.raises(TypeError):
            BaseDao(42)

    def test_absolute_names_bypass_the_root(self, tmp_path, instance_dao):
        absolute = tmp_path / "elsewhere" / "x.txt"
        assert instance_dao._resolve(absolute) == absolute
        assert instance_dao._resolve("x.txt") == tmp_path / "x.txt"


class TestInstanceDAO:
    def test_matrices_are_exact(self, instance_dao, three_state):
        instance_dao.save_instance("chain.txt", three_state)
        record = instance_dao.load("chain.txt")
        assert record.kind == "matrices"
        np.testing.assert_array_equal(record.instance.d_mu, three_state.d_mu)
        np.testing.assert_array_equal(record.instance.P_pi, three_state.P_pi)
        assert record.instance.name == "three-state"

    def test_family_descriptor(self, instance_dao):
        instance_dao.save_family("family.txt", FamilyDescriptor(m=31))
        record = instance_dao.load("family.txt")
        assert record.kind == "family"
        assert record.family.m == 31

    def test_mdp(self, instance_dao, family23):
        mdp, policies = build_experiment_mdp(family23)
        instance_dao.save_mdp("mdp.txt", mdp, policies)
        record = instance_dao.load("mdp.txt")
        assert record.kind == "mdp"
        np.testing.assert_array_equal(record.mdp.transition, mdp.transition)
        np.testing.assert_array_equal(record.policies.mu, policies.mu)
        assert record.mdp.state_labels == mdp.state_labels

    def test_nested_directories_are_created(self, instance_dao, tmp_path, single_state):
        instance_dao.save_instance("a/b/one.txt", single_state)
        assert (tmp_path / "a" / "b" / "one.txt").is_file()
        assert not list((tmp_path / "a" / "b").glob(".*.tmp"))

    def test_missing_file(self, instance_dao):
        with pytest.raises(NotFound):
            instance_dao.load("missing.txt")

    def test_bad_magic(self, instance_dao, tmp_path):
        name = _write(tmp_path, "bad.txt", ["# something else", "kind family", "family example1", "m 23", "end"])
        with pytest.raises(InstanceFormatError) as info:
            instance_dao.load(name)
        assert info.value.line_no == 1

    def test_unknown_kind(self, instance_dao, tmp_path):
        name = _write(tmp_path, "kind.txt", [MAGIC, "kind graph", "end"])
        with pytest.raises(InstanceFormatError):
            instance_dao.load(name)

    def test_short_row_reports_its_line(self, instance_dao, tmp_path):
        name = _write(tmp_path, "short.txt", [MAGIC, "kind matrices", "n 2", "d_mu", "0.5 0.5", "P_pi", "0.5 0.5", "1.0", "end"])
        with pytest.raises(InstanceFormatError) as info:
            instance_dao.load(name)
        assert info.value.line_no == 8

    def test_comments_and_blank_lines_are_skipped(self, instance_dao, tmp_path):
        lines = [MAGIC, "kind matrices", "", "# two states", "n 2", "d_mu", "0.5 0.5", "P_pi", "0 1", "1 0", "end"]
        record = instance_dao.load(_write(tmp_path, "comments.txt", lines))
        np.testing.assert_array_equal(record.instance.P_pi, [[0.0, 1.0], [1.0, 0.0]])

    def test_invalid_matrix_is_a_format_error(self, instance_dao, tmp_path):
        lines = [MAGIC, "kind matrices", "n 2", "d_mu", "0.5 0.5", "P_pi", "0.5 0.4", "1 0", "end"]
        with pytest.raises(InstanceFormatError):
            instance_dao.load(_write(tmp_path, "rows.txt", lines))

    def test_family_with_small_m(self, instance_dao, tmp_path):
        with pytest.raises(InstanceFormatError):
            instance_dao.load(_write(tmp_path, "small.txt", [MAGIC, "kind family", "family example1", "m 22", "end"]))

    def test_trailing_content(self, instance_dao, tmp_path):
        lines = [MAGIC, "kind family", "family example1", "m 23", "end", "m 24"]
        with pytest.raises(InstanceFormatError):
            instance_dao.load(_write(tmp_path, "trailing.txt", lines))


class TestResultsDAO:
    def test_format_cell(self):
        assert format_cell(True) == "1"
        assert format_cell(np.int64(7)) == "7"
        assert float(format_cell(1.0 / 3.0)) == 1.0 / 3.0
        assert format_cell("global") == "global"

    def test_header_round_trip(self, results_dao):
        config = RunConfig(command=CommandName.ETA_STAR, grid=64)
        results_dao.write_csv("star.csv", config, ["omega", "eta", "residual"], [[0.1, 1.0 / 550.0, 0.0]], notes={"eta_star": 1.0 / 550.0})
        table = results_dao.read_csv("star.csv")
        assert table.config == config
        assert table.notes["eta_star"] == format_cell(1.0 / 550.0)
        assert table.columns == ["omega", "eta", "residual"]
        assert table.column("eta")[0] == 1.0 / 550.0

    def test_first_line_is_the_banner(self, results_dao, tmp_path):
        results_dao.write_csv("x.csv", RunConfig(command=CommandName.LEMMA_CHECK), ["a"], [[1]])
        assert (tmp_path / "x.csv").read_text(encoding="utf-8").splitlines()[0] == BANNER

    def test_ragged_row(self, results_dao):
        with pytest.raises(DimensionError):
            results_dao.write_csv("x.csv", RunConfig(command=CommandName.LEMMA_CHECK), ["a", "b"], [[1]])

    def test_missing_banner(self, results_dao, tmp_path):
        (tmp_path / "plain.csv").write_text("a,b\n1,2\n", encoding="utf-8")
        with pytest.raises(ResultFormatError):
            results_dao.read_csv("plain.csv")

    def test_unreadable_config(self, results_dao, tmp_path):
        (tmp_path / "broken.csv").write_text(f"{BANNER}\n# run_config: {{not json\na\n1\n", encoding="utf-8")
        with pytest.raises(ResultFormatError):
            results_dao.read_csv("broken.csv")

    def test_plot_stub(self, results_dao, tmp_path):
        path = results_dao.write_plot_stub("fig/fig.gp", "title", ["plot 'x.csv' using 1:2 with lines"])
        text = path.read_text(encoding="utf-8")
        assert "set datafile separator ','" in text
        assert text.rstrip().endswith("with lines")
