import csv
import io
import json
import math

import pytest

from qedmagic.cli import main
from qedmagic.magic import LOG_16_7


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_stabilizers(capsys):
    code, out, _ = run(capsys, "stabilizers", "list")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "id" and len(rows) == 61
    code, out, _ = run(capsys, "stabilizers", "list", "--format", "json")
    assert json.loads(out)["schema"] == 1
    code, out, _ = run(capsys, "stabilizers", "verify")
    assert code == 0 and "PASS" in out


def test_magic_eval(capsys):
    # (|00> + e^{i pi/4}|11>)/sqrt2 style input as re/im pairs
    c = math.cos(math.pi / 4)
    code, out, _ = run(capsys, "magic", "eval", "--coeffs", "1", "0", "0", "0", "0", "0",
                       str(c), str(c), "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["m2_nats"] == pytest.approx(math.log(4 / 3))
    assert data["input_norm"] == pytest.approx(math.sqrt(2))


def test_usage_errors_exit_2(capsys):
    assert main(["magic", "eval", "--coeffs", "1", "2", "3"]) == 2
    assert main(["magic", "eval", "--coeffs", "0", "0", "0", "0"]) == 2
    assert main(["limit-matrix", "--process", "ee-mumu", "--regime", "low"]) == 2
    assert main(["amplitude", "--process", "ee-mumu", "--theta", "1", "--mu", "10"]) == 2
    assert main(["amplitude", "--process", "moller", "--theta", "0", "--mu", "1"]) == 2
    assert main(["scan", "--process", "compton", "--regime", "low"]) == 2
    capsys.readouterr()


def test_amplitude_and_limit_matrix(capsys):
    code, out, _ = run(capsys, "amplitude", "--process", "bhabha", "--theta", "1.0", "--mu", "0.001",
                       "--format", "json")
    amp = json.loads(out)
    assert code == 0 and amp["layout"] == "A[final][initial]"
    assert len(amp["matrix"]) == 4 and len(amp["matrix"][0]) == 4
    code, out, _ = run(capsys, "limit-matrix", "--process", "ee-mumu", "--regime", "high",
                       "--theta", "1.0", "--order", "1", "--format", "json")
    assert code == 0 and json.loads(out)["order"] == 1


def test_scan_csv(capsys, tmp_path):
    path = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--process", "moller", "--regime", "low", "--initial", "13,3",
                     "--grid", "4", "--out", str(path))
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["initial_id", "theta_rad", "xi2", "m2_nats", "status"]
    assert [r["initial_id"] for r in rows] == ["3"] * 3 + ["13"] * 3
    assert float(rows[3]["xi2"]) == pytest.approx(0.904)


def test_scan_is_deterministic_across_threads(capsys):
    args = ["scan", "--process", "emu", "--regime", "high", "--grid", "12"]
    _, one, _ = run(capsys, *args)
    _, four, _ = run(capsys, "--threads", "4", *args)
    assert one == four


def test_scan_engine_source(capsys):
    code, out, _ = run(capsys, "scan", "--process", "ee-mumu", "--regime", "threshold", "--initial", "7",
                       "--grid", "3", "--source", "engine")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    lam = 0.005
    g1 = (lam**8 + 14 * lam**4 + 1) / (lam**2 + 1) ** 4
    assert float(rows[0]["xi2"]) == pytest.approx(g1, abs=1e-5)


def test_classify_json_and_mode_env(capsys, monkeypatch):
    code, out, _ = run(capsys, "classify", "--process", "ee-mumu", "--regime", "threshold",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1 and data["lambda"] == 0.005
    assert any(c["representative"] == 7 for c in data["classes"])
    monkeypatch.setenv("QEDMAGIC_MODE", "physical")
    _, out, _ = run(capsys, "classify", "--process", "ee-mumu", "--regime", "threshold",
                    "--format", "json")
    assert json.loads(out)["lambda"] == 0.004836
    # the flag wins over the environment
    _, out, _ = run(capsys, "--mode", "paper", "classify", "--process", "ee-mumu", "--regime",
                    "threshold", "--format", "json")
    assert json.loads(out)["lambda"] == 0.005


def test_classify_text(capsys):
    code, out, _ = run(capsys, "classify", "--process", "mumu-ee", "--regime", "low")
    assert code == 0
    assert "12 classes" in out.splitlines()[0]
    # the G8 class peaks just below the two-qubit ceiling
    assert "M2_max = 0.826664288 at theta = 0.785398163, 2.356194490" in out
    assert 0.826664288 < LOG_16_7


def test_tables_reproduce(capsys):
    code, out, _ = run(capsys, "tables", "reproduce", "--which", "I")
    assert code == 0
    assert out.startswith("Table I") and "PASS" in out


def test_figures_emit(capsys, tmp_path):
    code, out, _ = run(capsys, "figures", "emit", "--which", "6", "--out", str(tmp_path), "--grid", "10")
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["fig6_F4.csv", "fig6_F5.csv"]
