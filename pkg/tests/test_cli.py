import csv
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from steerkit import cli

RT2 = math.sqrt(2.0)


def run_cli(args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "steerkit.cli", *args],
        capture_output=True,
        text=True,
        **kwargs,
    )


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


class TestAnalyze:
    def test_hierarchy_report(self):
        proc = run_cli(["analyze", "--family", "hierarchy", "--params", "s=0.65"])
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        # steerable in the simplest scenario yet no CHSH-type violation
        assert report["steerable"] is True
        assert report["bell_violable"] is False
        assert report["S"] == pytest.approx(2 * RT2 * 0.65, abs=1e-9)
        assert report["analog_chsh_value"] == pytest.approx(
            2 * RT2 * 0.65, abs=1e-9
        )
        assert report["concurrence"] == pytest.approx(0.65, abs=1e-9)
        assert report["sdp_restricted"]["status"] == "infeasible"
        assert report["sdp_full"]["status"] == "infeasible"

    def test_one_way_report(self):
        proc = run_cli(
            ["analyze", "--family", "one_way", "--params", "p=0.8,theta=0.05"]
        )
        report = json.loads(proc.stdout)
        assert report["steerable"] is True  # p > 1/sqrt2
        assert report["bell_violable"] is False

    def test_product_state_all_negative(self, tmp_path):
        from steerkit import states

        alpha = np.array([0.0, 0.0, 0.3])
        beta = np.array([0.4, 0.0, 0.0])
        st = states.compose(alpha, beta, np.outer(alpha, beta))
        path = tmp_path / "state.json"
        path.write_text(st.to_json())
        proc = run_cli(["analyze", "--state", str(path)])
        report = json.loads(proc.stdout)
        assert report["steerable"] is False
        assert report["bell_violable"] is False
        assert report["concurrence"] == pytest.approx(0.0, abs=1e-10)
        assert report["sdp_full"]["status"] == "feasible"

    def test_validation_error_exit_code(self):
        proc = run_cli(["analyze", "--family", "hierarchy", "--params", "s=1.5"])
        assert proc.returncode == cli.EXIT_VALIDATION
        assert "error" in proc.stderr


class TestScan:
    def test_hierarchy_boundaries_within_grid_step(self, tmp_path):
        out = tmp_path / "h.csv"
        proc = run_cli(
            [
                "scan",
                "--family",
                "hierarchy",
                "--grid",
                "s=0:1:201",
                "--out",
                str(out),
            ]
        )
        assert proc.returncode == 0
        rows = read_csv(str(out))
        assert len(rows) == 201
        step = 1.0 / 200
        svals = np.array([float(r["s"]) for r in rows])
        steer = np.array([r["steerable"] == "1" for r in rows])
        viol = np.array([r["bell_violable"] == "1" for r in rows])
        flip_steer = svals[np.argmax(steer)]
        flip_viol = svals[np.argmax(viol)]
        assert abs(flip_steer - (math.sqrt(5) - 1) / 2) <= step + 1e-12
        assert abs(flip_viol - 1 / RT2) <= step + 1e-12

    def test_scan_deterministic_bytes(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        args = ["scan", "--family", "random", "--n", "40", "--seed", "9"]
        assert run_cli([*args, "--out", str(out1)]).returncode == 0
        assert run_cli([*args, "--out", str(out2)]).returncode == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_random_scan_bounds_hold(self, tmp_path):
        out = tmp_path / "r.csv"
        run_cli(
            ["scan", "--family", "random", "--n", "200", "--seed", "1", "--out", str(out)]
        )
        rows = read_csv(str(out))
        assert len(rows) == 200
        for r in rows:
            assert r["lower_ok"] == "1" and r["upper_ok"] == "1"
            assert r["lower_mub_ok"] == "1" and r["upper_mub_ok"] == "1"

    def test_one_way_scan_region_flags(self, tmp_path):
        out = tmp_path / "ow.csv"
        run_cli(
            [
                "scan",
                "--family",
                "one_way",
                "--grid",
                "p=0.6:1:9,theta=0.02:0.6:7",
                "--out",
                str(out),
            ]
        )
        rows = read_csv(str(out))
        assert len(rows) == 63
        for r in rows:
            p = float(r["p"])
            th = float(r["theta"])
            s2 = math.sin(2 * th)
            assert (r["bell_violable"] == "1") == (p * p * (1 + s2 * s2) > 1)
            assert (r["steerable_ab"] == "1") == (p > 1 / RT2)
            rhs = (2 * p - 1) / ((2 - p) * p**3)
            assert (r["bob_to_alice_unsteerable"] == "1") == (
                math.cos(2 * th) ** 2 >= rhs
            )

    def test_jobs_parallel_matches_serial(self, tmp_path):
        a = tmp_path / "s1.csv"
        b = tmp_path / "s2.csv"
        base = ["scan", "--family", "hierarchy", "--grid", "s=0:1:41"]
        run_cli([*base, "--out", str(a)])
        run_cli([*base, "--jobs", "4", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_out_dir_env(self, tmp_path):
        env = dict(os.environ, STEERKIT_OUT_DIR=str(tmp_path / "outputs"))
        proc = run_cli(
            ["scan", "--family", "hierarchy", "--grid", "s=0:1:5", "--out", "env.csv"],
            env=env,
        )
        assert proc.returncode == 0
        assert (tmp_path / "outputs" / "env.csv").exists()


class TestCrosscheck:
    def test_agreement_and_exit_code(self):
        proc = run_cli(["crosscheck", "--n", "60", "--seed", "4"])
        assert proc.returncode == 0
        summary = json.loads(proc.stdout)
        assert summary["disagreements"] == 0
        assert summary["instances"] == 60

    def test_zero_instances_rejected(self):
        proc = run_cli(["crosscheck", "--n", "0"])
        assert proc.returncode == cli.EXIT_VALIDATION

    def test_reproducible(self):
        a = run_cli(["crosscheck", "--n", "25", "--seed", "7"]).stdout
        b = run_cli(["crosscheck", "--n", "25", "--seed", "7"]).stdout
        assert a == b


class TestSample:
    def test_csv_written_and_value_reported(self, tmp_path):
        out = tmp_path / "sample.csv"
        proc = run_cli(
            [
                "sample",
                "--family",
                "hierarchy",
                "--params",
                "s=0.9",
                "--policy",
                "optimal",
                "--shots",
                "200000",
                "--seed",
                "3",
                "--out",
                str(out),
            ]
        )
        assert proc.returncode == 0
        result = json.loads(proc.stdout)
        assert result["analog_chsh_value"] == pytest.approx(2 * RT2 * 0.9, abs=0.02)
        rows = read_csv(str(out))
        assert len(rows) == 4
        assert int(rows[0]["shots"]) == 200000


class TestParsing:
    def test_parse_axes(self):
        a1, a2, b1, b2 = cli.parse_axes("x;z;0,1,0;1,0,0")
        assert np.allclose(a1, [1, 0, 0])
        assert np.allclose(b1, [0, 1, 0])

    def test_parse_grid(self):
        grid = cli.parse_grid("s=0:1:5")
        assert np.allclose(grid["s"], [0, 0.25, 0.5, 0.75, 1.0])

    def test_bad_axes(self):
        from steerkit.errors import SteerkitError

        with pytest.raises(SteerkitError):
            cli.parse_axes("x;z")
