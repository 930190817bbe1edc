"""
Filename: test_cli.py
Project: TD Clock Stability (TDCS)
Description: Command line entry point: exit codes, result files and re-running from a result header
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import pytest

from td_clock_stability._exceptions import EXIT_OK
from td_clock_stability._exceptions import EXIT_VALIDATION
from td_clock_stability.dao.instance_dao import InstanceDAO
from td_clock_stability.dao.results_dao import ResultsDAO
from td_clock_stability.main import build_parser
from td_clock_stability.main import main
from td_clock_stability.schemas.run_schemas import CommandName


pytestmark = pytest.mark.usefixtures("restore_root_logging")


def _run(tmp_path, *argv) -> int:
    return main(["--output-dir", str(tmp_path), *argv])


class TestParser:
    def test_subcommand_is_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_reproduce_takes_a_figure(self):
        args = build_parser().parse_args(["reproduce", "fig2", "--steps", "100"])
        assert args.figure == "fig2"
        assert args.steps == 100


class TestCommands:
    def test_lemma_check(self, tmp_path, capsys):
        assert _run(tmp_path, "lemma-check", "--m", "23") == EXIT_OK
        assert "min_real_part" in capsys.readouterr().out
        table = ResultsDAO(root=tmp_path).read_csv("lemma_check_example1-m23.csv")
        assert table.config.command == CommandName.LEMMA_CHECK
        assert len(table.rows) == 25

    def test_eta_star(self, tmp_path, capsys):
        assert _run(tmp_path, "eta-star", "--m", "24", "--grid", "64") == EXIT_OK
        assert "eta* =" in capsys.readouterr().out
        assert (tmp_path / "eta_star_example1-m24.csv").is_file()

    def test_instance_then_instance_file(self, tmp_path, capsys):
        assert _run(tmp_path, "instance", "--m", "23", "--materialize", "-o", "m23.txt") == EXIT_OK
        record = InstanceDAO(root=tmp_path).load("m23.txt")
        assert record.kind == "matrices"
        assert record.instance.n == 25

        assert _run(tmp_path, "lemma-check", "--instance", str(tmp_path / "m23.txt"), "-o", "from_file.csv") == EXIT_OK
        assert (tmp_path / "from_file.csv").is_file()

    def test_experiment_mdp(self, tmp_path):
        assert _run(tmp_path, "instance", "--mdp", "--kappa", "0.001") == EXIT_OK
        record = InstanceDAO(root=tmp_path).load("example1-m23_mdp.txt")
        assert record.kind == "mdp"
        assert record.policies.mu[0, 0] == 0.001

    def test_expected_update(self, tmp_path, capsys):
        assert _run(tmp_path, "simulate", "--expected-update", "--steps", "1000", "--c", "0.5", "--n0", "0", "--beta", "1") == EXIT_OK
        assert "expected update" in capsys.readouterr().out
        table = ResultsDAO(root=tmp_path).read_csv("simulate_example1-m23_expected.csv")
        assert table.notes["algorithm"] == "expected-differential"
        assert table.column("t")[-1] == 1000

    def test_sampled_run(self, tmp_path):
        assert _run(tmp_path, "simulate", "--steps", "1000", "--clocks", "global", "local", "--seeds", "3") == EXIT_OK
        for clock in ("global", "local"):
            table = ResultsDAO(root=tmp_path).read_csv(f"simulate_example1-m23_seed3_{clock}.csv")
            assert table.notes["clock"] == clock
            assert table.config.seeds == [3]

    def test_from_result(self, tmp_path, capsys):
        assert _run(tmp_path, "derivative", "--m", "23", "--epsilon", "1e-7") == EXIT_OK
        first = capsys.readouterr().out
        path = tmp_path / "derivative_example1-m23.csv"
        rerun = tmp_path / "rerun"
        assert main(["--output-dir", str(rerun), "derivative", "--from-result", str(path)]) == EXIT_OK
        assert capsys.readouterr().out == first
        assert ResultsDAO(root=rerun).read_csv("derivative_example1-m23.csv").config.epsilon == 1e-7


class TestFailures:
    def test_family_parameter_too_small(self, tmp_path, capsys):
        assert _run(tmp_path, "lemma-check", "--m", "22") == EXIT_VALIDATION
        assert "error [VALIDATION_ERROR]" in capsys.readouterr().err

    def test_missing_instance_file(self, tmp_path, capsys):
        assert _run(tmp_path, "eta-star", "--instance", str(tmp_path / "missing.txt")) == EXIT_VALIDATION
        assert "error [NOT_FOUND]" in capsys.readouterr().err

    def test_kappa_above_the_bound(self, tmp_path, capsys):
        assert _run(tmp_path, "instance", "--mdp", "--kappa", "0.5") == EXIT_VALIDATION
        assert "error [KAPPA_BOUND_ERROR]" in capsys.readouterr().err

    def test_eta_and_ratio_together(self, tmp_path, capsys):
        assert _run(tmp_path, "simulate", "--eta", "0.1", "--eta-ratio", "2", "--steps", "10") == EXIT_VALIDATION
        assert "error [VALIDATION_ERROR]" in capsys.readouterr().err
