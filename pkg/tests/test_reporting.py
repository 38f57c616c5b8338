"""Tests for CSV/JSON emission and run manifests."""

import json

import numpy as np
import pandas as pd
import pytest

from src import __version__
from src.breakeven_solver import sweep
from src.discrete_game import enumerate_outcomes
from src.gaussian_model import PayoffSpec
from src.monte_carlo import SimulationResult
from src.reporting import (
    RunManifest, analytic_report, discrete_report, dumps_json, print_fields,
    simulation_report, to_jsonable, write_csv, write_json,
)


class TestJson:
    def test_numpy_and_nonfinite(self):
        value = to_jsonable({"a": np.float64(0.5), "b": np.int64(3), "c": float("nan"),
                             "d": np.array([1.0, np.inf]), "e": np.bool_(True)})
        assert value == {"a": 0.5, "b": 3, "c": None, "d": [1.0, None], "e": True}

    def test_dumps_is_stable(self):
        text = dumps_json({"x": 1.0, "y": [1, 2]})
        assert text.endswith("\n")
        assert text == dumps_json({"x": 1.0, "y": [1, 2]})
        assert json.loads(text) == {"x": 1.0, "y": [1, 2]}

    def test_write_json(self, tmp_path):
        path = write_json({"nan": float("nan")}, tmp_path / "sub" / "out.json")
        assert json.loads(path.read_text()) == {"nan": None}


class TestCsv:
    def test_lf_and_round_trip(self, tmp_path):
        frame = sweep([0.0, 0.05], [0.1, 0.2]).to_frame()
        path = write_csv(frame, tmp_path / "surface.csv")
        raw = path.read_bytes()
        assert b"\r\n" not in raw
        assert raw.startswith(b"mu,interest,sigma,expected_return\n")
        back = pd.read_csv(path, float_precision="round_trip")
        assert back["expected_return"].tolist() == frame["expected_return"].tolist()


class TestReports:
    def test_discrete(self, one_coin_game):
        report = discrete_report(enumerate_outcomes(one_coin_game))
        assert report["total_win"] == 5
        assert report["total_loss"] == 15
        assert report["total_b_net"] == 10
        assert report["expected_net"] == "-10/11"
        assert len(report["rows"]) == 11
        dumps_json(report)

    def test_analytic(self, fair_params):
        report = analytic_report(PayoffSpec(interest=1.0), fair_params)
        assert abs(report["expected_return_ratio"]) < 5e-3
        assert report["expected_net_payoff"] == pytest.approx(
            report["expected_win"] - report["expected_loss"], abs=1e-9)
        assert report["win_form"] == "capped"
        assert report["requested_interest"] == report["interest"] == 1.0

    def test_analytic_echoes_requested_rate(self, fair_params):
        spec = PayoffSpec.for_interest(1.6)
        report = analytic_report(spec, fair_params, requested_interest=1.6)
        assert report["requested_interest"] == 1.6
        assert report["interest"] == 1.0

    def test_simulation(self):
        result = SimulationResult(-0.9, 5.0, 15.0, -0.66, float("nan"), 1, 3)
        report = simulation_report(result, "discrete", {"loan_coins": 5})
        assert report["version"] == __version__
        assert report["result"]["seed"] == 3
        assert json.loads(dumps_json(report))["result"]["std_error"] is None

    def test_print_fields(self, capsys):
        print_fields({"alpha": 0.123456789012, "b": "x"}, "Title")
        out = capsys.readouterr().out
        assert out.startswith("Title\n-----\n")
        assert "0.123456789" in out


class TestManifest:
    def test_outputs_and_status(self, tmp_path):
        good = tmp_path / "a.csv"
        good.write_text("x\n1\n")
        manifest = RunManifest(command="reproduce", parameters={"quick": True}, seeds=[1])
        manifest.add_output(good)
        assert manifest.succeeded
        manifest.add_output(tmp_path / "missing.csv", status="failed", error="boom")
        assert not manifest.succeeded

        manifest.finish()
        d = manifest.to_dict()
        assert "_started" not in d
        assert d["version"] == __version__
        assert d["outputs"][0] == {"file": "a.csv", "status": "ok", "bytes": 4}
        assert d["outputs"][1]["error"] == "boom"
        assert d["duration_seconds"] >= 0

    def test_empty_file_is_not_success(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        manifest = RunManifest(command="reproduce", parameters={})
        manifest.add_output(empty)
        assert not manifest.succeeded
