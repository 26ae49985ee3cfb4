import json
import math
from pathlib import Path

import numpy as np
import pytest

from radial_plap.cli import main


def run(*argv):
    return main(list(argv))


def read_json(path):
    return json.loads(Path(path).read_text())


class TestCheckConditions:
    def test_rmk23_verdicts(self, tmp_path):
        code = run("check-conditions", "--preset", "rmk23",
                   "--out-dir", str(tmp_path))
        assert code == 0
        reports = {r["condition"]: r["verdict"]
                   for r in read_json(tmp_path / "conditions.json")}
        assert reports["W1"] == "holds"
        assert reports["OK"] == "fails"

    def test_trivial_annulus_A_holds(self, tmp_path):
        code = run("check-conditions", "--preset", "annulus-trivial",
                   "--out-dir", str(tmp_path))
        assert code == 0
        reports = {r["condition"]: r for r in read_json(tmp_path / "conditions.json")}
        assert reports["A"]["verdict"] == "holds"
        assert reports["A"]["witnesses"]["integral_P_sigma"] == pytest.approx(
            0.25, abs=1e-6
        )

    def test_malformed_spec_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"N": 2, "p": 2.0, "R1": 1.0, "R2": 2.0, "v": [], "w": []}')
        assert run("check-conditions", "--problem", str(bad),
                   "--out-dir", str(tmp_path)) == 2

    def test_unparseable_json_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run("check-conditions", "--problem", str(bad),
                   "--out-dir", str(tmp_path)) == 2

    def test_missing_file_exits_2(self, tmp_path):
        assert run("check-conditions", "--problem", str(tmp_path / "nope.json"),
                   "--out-dir", str(tmp_path)) == 2


class TestSolve:
    def test_trivial_preset(self, tmp_path):
        code = run("solve", "--preset", "annulus-trivial", "--no-check",
                   "--out-dir", str(tmp_path))
        assert code == 0
        out = read_json(tmp_path / "solve.json")
        assert out["lambda1"] == pytest.approx(math.pi**2, rel=1e-8)
        rows = np.loadtxt(tmp_path / "eigenfunction.csv", delimiter=",",
                          skiprows=1)
        assert rows.shape[1] == 3
        header = (tmp_path / "eigenfunction.csv").read_text().splitlines()[0]
        assert header == "r,u,flux"

    def test_usage_error_without_problem(self, tmp_path):
        assert run("solve", "--out-dir", str(tmp_path)) == 2


class TestAsymptoticsCommand:
    def test_annulus_both_boundaries(self, tmp_path):
        code = run("asymptotics", "--preset", "annulus-trivial", "--no-check",
                   "--out-dir", str(tmp_path))
        assert code == 0
        verdicts = read_json(tmp_path / "asymptotics.json")
        assert {v["boundary"] for v in verdicts} == {"left", "right"}
        assert all(v["pass"] for v in verdicts)
        csv_left = np.loadtxt(tmp_path / "asymptotics_left.csv", delimiter=",",
                              skiprows=1)
        assert csv_left.shape[1] == 4  # r, u, envelope, ratio


class TestDegiorgiCommand:
    def test_single_run(self, tmp_path):
        code = run("degiorgi", "--K", "1", "--eta", "2", "--d1", "1",
                   "--d2", "1", "--J0", "0.25", "--out-dir", str(tmp_path))
        assert code == 0
        out = read_json(tmp_path / "degiorgi.json")
        assert out["bound_verified"] is True
        assert out["threshold_a"] == pytest.approx(0.25)

    def test_sweep(self, tmp_path):
        code = run("degiorgi", "--sweep", "50", "--seed", "3",
                   "--out-dir", str(tmp_path))
        assert code == 0
        out = read_json(tmp_path / "degiorgi.json")
        assert out["a"]["counterexamples"] == 0
        assert out["b"]["counterexamples"] == 0

    def test_missing_params_usage_error(self, tmp_path):
        assert run("degiorgi", "--K", "1", "--out-dir", str(tmp_path)) == 2


class TestExample:
    def test_unknown_preset_exits_2(self, tmp_path):
        assert run("example", "nope", "--out-dir", str(tmp_path)) == 2

    def test_trivial_pipeline(self, tmp_path):
        code = run("example", "annulus-trivial", "--out-dir", str(tmp_path))
        assert code == 0
        summary = read_json(tmp_path / "summary.json")
        assert summary["lambda1"] == pytest.approx(math.pi**2, rel=1e-6)
        assert summary["conditions"]["A"] == "holds"
        assert all(row.get("pass") for row in summary["asymptotics"])
        manifest = read_json(tmp_path / "manifest.json")
        assert "summary.json" in manifest["outputs"]
        assert "eigenfunction.csv" in manifest["outputs"]


class TestDeterminism:
    def test_reruns_byte_identical(self, tmp_path):
        """Identical spec + version produce byte-identical result files; only
        the manifest carries timestamps."""
        d1, d2 = tmp_path / "a", tmp_path / "b"
        for d in (d1, d2):
            assert run("check-conditions", "--preset", "ex61",
                       "--out-dir", str(d), "--seed", "7") == 0
        assert (d1 / "conditions.json").read_bytes() == \
            (d2 / "conditions.json").read_bytes()

    def test_solve_rerun_identical(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        for d in (d1, d2):
            assert run("solve", "--preset", "annulus-n3", "--no-check",
                       "--out-dir", str(d)) == 0
        assert (d1 / "solve.json").read_bytes() == (d2 / "solve.json").read_bytes()
        assert (d1 / "eigenfunction.csv").read_bytes() == \
            (d2 / "eigenfunction.csv").read_bytes()
