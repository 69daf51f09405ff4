import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from strichartz.cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lambda_golden(tmp_path, monkeypatch):
    monkeypatch.setenv("STRICHARTZ_CACHE_DIR", str(tmp_path / "cache"))
    out = tmp_path / "l2.json"
    assert main(["lambda", "--order", "2", "--out", str(out)]) == EXIT_OK
    assert out.read_bytes() == (GOLDEN / "lambda-2.json").read_bytes()
    # second run goes through the cache and must not change a byte
    out2 = tmp_path / "l2b.json"
    assert main(["lambda", "--order", "2", "--out", str(out2)]) == EXIT_OK
    assert out2.read_bytes() == out.read_bytes()
    assert any((tmp_path / "cache").iterdir())


def test_lambda_order_zero(capsys, tmp_path):
    code, out, _ = run(capsys, "lambda", "--order", "0", "--cache-dir", str(tmp_path))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["n_entries"] == 1 and doc["max_order"] == 0
    # int f_0^6 against exp(-3 x^2) over the normalization: 1 / (pi sqrt 3)
    assert doc["entries"][0][6] == pytest.approx(1 / (math.pi * math.sqrt(3)), rel=1e-14)
    assert doc["constant"] == pytest.approx(math.pi / 2)


def test_flow_gradient_stationary(capsys, tmp_path):
    code, out, _ = run(capsys, "flow", "gradient", "--init", "mode:0", "--order", "8",
                       "--cache-dir", str(tmp_path))
    rows = out.strip().splitlines()
    assert code == EXIT_OK and rows[0].startswith("t,S,")
    assert len(rows) == 2
    assert float(rows[1].split(",")[1]) == pytest.approx(1 / math.sqrt(12))


def test_flow_gradient_noisy_gaussian(capsys, tmp_path):
    code, out, _ = run(capsys, "flow", "gradient", "--init", "gaussian+noise:0.05:42",
                       "--order", "8", "--cache-dir", str(tmp_path))
    last = out.strip().splitlines()[-1].split(",")
    assert code == EXIT_OK
    # S error is quadratic in the 1e-8 gradient tolerance
    assert float(last[1]) == pytest.approx(1 / math.sqrt(12), rel=1e-7)
    assert float(last[5]) < 1e-8


def test_flow_hamiltonian_mode(capsys, tmp_path):
    code, out, _ = run(capsys, "flow", "hamiltonian", "--init", "mode:3", "--order", "6",
                       "--dt", "1e-3", "--t", "0.5", "--cache-dir", str(tmp_path))
    data = np.loadtxt(out.splitlines()[1:], delimiter=",")
    assert code == EXIT_OK
    for col in (2, 3, 4):
        assert np.max(np.abs(data[:, col] / data[0, col] - 1)) < 1e-8


def test_hessian_mode(capsys):
    code, out, _ = run(capsys, "hessian", "mode", "--m", "10", "--tail", "400")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["schema_version"] == 1
    assert doc["block_counts"] == {"negative": 7, "zero": 2, "positive": 11}
    assert doc["block_eigenvalues"][-1] == pytest.approx(0.654569, abs=1e-6)
    assert doc["tail_settled"]


def test_hessian_mode_zero(capsys):
    code, out, _ = run(capsys, "hessian", "mode", "--m", "0", "--tail", "50")
    doc = json.loads(out)
    assert doc["counts"] == {"negative": 48, "zero": 2, "positive": 0}


def test_hessian_gaussian_csv(capsys):
    code, out, _ = run(capsys, "hessian", "gaussian", "--dim", "2", "--nmax", "4", "--format", "csv")
    vals = np.array([float(v) for v in out.splitlines()[1:]])
    assert code == EXIT_OK and len(vals) == 24 and vals.max() < 1e-8


def test_inequality_commands(capsys):
    code, out, _ = run(capsys, "inequality", "--nmax", "2")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["equalities"] == [1, 2] and doc["margins"] == {"1": "0", "2": "0"}
    code, out, _ = run(capsys, "inequality", "column", "--dim", "3", "--kmax", "6")
    assert code == EXIT_OK and json.loads(out)["passed"]


def test_qmho_commands(capsys):
    code, out, _ = run(capsys, "qmho", "hessian", "--m", "1", "--n", "4")
    assert out.splitlines() == ["k,entry", "0,-4", "2,4", "3,8"]
    code, out, _ = run(capsys, "qmho", "flow", "--steps", "2000")
    assert code == EXIT_OK
    assert float(out.strip().splitlines()[-1].split(",")[1]) == pytest.approx(1.0, abs=1e-6)


def test_oracle_check(capsys, tmp_path):
    code, out, _ = run(capsys, "oracle", "check", "--order", "3", "--samples", "1",
                       "--cache-dir", str(tmp_path))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["passed"] and doc["max_rel_err"] < 1e-6


@pytest.mark.parametrize("argv", [
    ["lambda"],
    ["lambda", "--order", "-1"],
    ["flow", "gradient", "--init", "mode:99", "--order", "4"],
    ["flow", "gradient", "--init", "[[0, 0]]", "--order", "4"],
    ["hessian", "mode", "--m", "5", "--tail", "8"],
    ["hessian", "gaussian", "--dim", "3", "--nmax", "20", "--cap", "100"],
    ["qmho", "flow", "--init", "not json"],
    ["bogus"],
])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.setenv("STRICHARTZ_CACHE_DIR", str(tmp_path))
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == EXIT_USAGE


def test_check_failure_exit(capsys):
    code, _, err = run(capsys, "qmho", "flow", "--init", "[1,0,0,0,0,0,0,0,0,0.3]", "--step", "5")
    assert code == EXIT_CHECK_FAILED and "check failed" in err
    code, _, _ = run(capsys, "oracle", "check", "--order", "2", "--samples", "0", "--tol", "1e-30")
    assert code == EXIT_CHECK_FAILED


def test_determinism_and_entry_points(tmp_path):
    env_args = ["--threads", "1", "flow", "gradient", "--init", "gaussian+noise:0.05:7",
                "--order", "4", "--steps", "20", "--cache-dir", str(tmp_path)]
    a = subprocess.run([sys.executable, "-m", "strichartz", *env_args], capture_output=True, check=True)
    b = subprocess.run([sys.executable, "-m", "strichartz", *env_args], capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stdout
    bad = subprocess.run([sys.executable, "-m", "strichartz", "hessian"], capture_output=True)
    assert bad.returncode == EXIT_USAGE
