import json
import socket
import subprocess
import sys
import time

import numpy as np
import pytest
from click.testing import CliRunner

from latentlab import load_csv
from latentlab.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


class TestGenerate:
    def test_seed_determinism(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        r1 = runner.invoke(main, ["generate", "--seed", "7", "--out", str(a)])
        r2 = runner.invoke(main, ["generate", "--seed", "7", "--out", str(b)])
        assert r1.exit_code == 0 and r2.exit_code == 0
        assert a.read_text() == b.read_text()

    def test_default_layout_round_trips(self, runner, tmp_path):
        out = tmp_path / "d.csv"
        result = runner.invoke(main, ["generate", "--out", str(out)])
        assert result.exit_code == 0
        header = out.read_text().splitlines()[0].split(",")
        assert header[:2] == ["group", "target"]
        assert len(header) == 2 + 30
        ds = load_csv(out)
        assert ds.m == 100 and ds.n == 30

    def test_bad_sigma_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, [
            "generate", "--sigma-left", "-1", "--out", str(tmp_path / "x.csv"),
        ])
        assert result.exit_code == 2

    def test_db_snr_flag(self, runner, tmp_path):
        out = tmp_path / "n.csv"
        result = runner.invoke(main, [
            "generate", "--noise-snr-db", "13.0", "--out", str(out),
        ])
        assert result.exit_code == 0
        clean = tmp_path / "c.csv"
        runner.invoke(main, ["generate", "--out", str(clean)])
        assert out.read_text() != clean.read_text()


class TestFit:
    def test_noise_free_pls(self, runner):
        result = runner.invoke(main, [
            "fit", "--example", "--method", "pls", "--n-components", "2",
        ])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["rmse_test"] < 1e-8
        assert report["schema_version"] == "1"

    def test_lasso_sparsity_in_json(self, runner):
        result = runner.invoke(main, [
            "fit", "--example", "--method", "lasso", "--lambda", "0.015",
        ])
        assert result.exit_code == 0
        report = json.loads(result.output)
        coef = report["coefficients"]
        zero_count = sum(1 for c in coef if c == 0.0)
        assert zero_count >= 0.8 * len(coef)

    def test_missing_dataset_exits_2(self, runner):
        result = runner.invoke(main, ["fit", "--method", "ols"])
        assert result.exit_code == 2

    def test_nonexistent_input_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, [
            "fit", "--input", str(tmp_path / "missing.csv"), "--method", "ols",
        ])
        assert result.exit_code == 2

    def test_fit_from_csv_file(self, runner, tmp_path):
        data = tmp_path / "gen.csv"
        assert runner.invoke(main, ["generate", "--out", str(data)]).exit_code == 0
        result = runner.invoke(main, [
            "fit", "--input", str(data), "--method", "pls", "--n-components", "2",
        ])
        assert result.exit_code == 0
        assert json.loads(result.output)["rmse_test"] < 1e-8

    def test_rank_failure_exits_3(self, runner):
        result = runner.invoke(main, [
            "fit", "--dataset", "ftir-like", "--method", "pls", "--n-components", "50",
        ])
        assert result.exit_code == 3

    def test_figures_and_csv_outputs(self, runner, tmp_path):
        figures = tmp_path / "figs"
        coef_csv = tmp_path / "coef.csv"
        out = tmp_path / "report.json"
        result = runner.invoke(main, [
            "fit", "--dataset", "ftir-like", "--method", "pls", "--n-components", "4",
            "--split-mode", "grouped_random", "--out", str(out),
            "--coefficients-csv", str(coef_csv), "--figures", str(figures),
        ])
        assert result.exit_code == 0
        assert json.loads(out.read_text())["dataset"] == "ftir-like"
        assert coef_csv.read_text().splitlines()[0] == "feature_index,axis_value,coefficient"
        for name in ("data.png", "coefficients.png", "parity.png"):
            path = figures / name
            assert path.exists() and path.stat().st_size > 0


class TestStability:
    def test_csv_deterministic(self, runner, tmp_path):
        args = [
            "stability", "--dataset", "lfp-like", "--method", "pls", "--n-components", "4",
            "--split-mode", "grouped_random", "--repeats", "4",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        r1 = runner.invoke(main, args + ["--out", str(a)])
        r2 = runner.invoke(main, args + ["--out", str(b)])
        assert r1.exit_code == 0 and r2.exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_row_count(self, runner, tmp_path):
        out = tmp_path / "s.csv"
        result = runner.invoke(main, [
            "stability", "--example", "--method", "ridge", "--lambda", "1.0",
            "--repeats", "5", "--out", str(out),
        ])
        assert result.exit_code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 5 * 30

    def test_single_repeat_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, [
            "stability", "--example", "--method", "ols", "--repeats", "1",
            "--out", str(tmp_path / "x.csv"),
        ])
        assert result.exit_code == 2

    def test_stability_figure(self, runner, tmp_path):
        figs = tmp_path / "figs"
        result = runner.invoke(main, [
            "stability", "--example", "--method", "ridge", "--lambda", "0.5",
            "--repeats", "3", "--out", str(tmp_path / "s.csv"), "--figures", str(figs),
        ])
        assert result.exit_code == 0
        assert (figs / "stability.png").stat().st_size > 0


class TestStandins:
    def test_exports_three_files(self, runner, tmp_path):
        result = runner.invoke(main, ["standins", "--out-dir", str(tmp_path)])
        assert result.exit_code == 0
        for name in ("ftir-like", "raman-like", "lfp-like"):
            ds = load_csv(tmp_path / f"{name}.csv")
            assert ds.name == name


class TestServe:
    def test_env_vars_feed_defaults(self):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        blocker.listen(1)
        try:
            import os

            env = dict(os.environ, LATENTLAB_PORT=str(port))
            proc = subprocess.run(
                [sys.executable, "-m", "latentlab.cli", "serve"],
                capture_output=True, text=True, timeout=30, env=env,
            )
        finally:
            blocker.close()
        # The env-provided port is occupied, so binding it must fail with 4.
        assert proc.returncode == 4
        assert str(port) in proc.stderr

    def test_occupied_port_exits_4(self):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        blocker.listen(1)
        try:
            proc = subprocess.run(
                [sys.executable, "-m", "latentlab.cli", "serve", "--port", str(port)],
                capture_output=True, text=True, timeout=30,
            )
        finally:
            blocker.close()
        assert proc.returncode == 4
        assert "cannot bind" in proc.stderr

    def test_port_zero_prints_assigned_port(self):
        proc = subprocess.Popen(
            [sys.executable, "-m", "latentlab.cli", "serve", "--port", "0"],
            stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True,
        )
        try:
            line = proc.stdout.readline()
            info = json.loads(line)
            address = info["listening"]
            port = int(address.rsplit(":", 1)[1])
            assert port > 0
            # The advertised port actually answers /health.
            import urllib.request

            deadline = time.time() + 15
            body = None
            while time.time() < deadline:
                try:
                    with urllib.request.urlopen(f"http://127.0.0.1:{port}/health", timeout=2) as resp:
                        body = json.loads(resp.read())
                    break
                except Exception:
                    time.sleep(0.2)
            assert body is not None and body["status"] == "ok"
        finally:
            proc.terminate()
            proc.wait(timeout=10)
