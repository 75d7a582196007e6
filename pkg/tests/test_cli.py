import json
import subprocess
import sys

import jsonschema
import pytest

from fivegonal import cli


@pytest.fixture(scope="module")
def curve13(tmp_path_factory):
    out = tmp_path_factory.mktemp("c") / "c13.json"
    assert cli.main(["gen-curve", "--genus", "13", "--prime", "10007", "--seed", "42", "--out", str(out)]) == 0
    return out


def run_json(capsys, argv):
    code = cli.main(argv + ["--json"])
    rep = json.loads(capsys.readouterr().out)
    jsonschema.validate(rep, cli.report_schema())
    assert rep["exit_code"] == code
    return code, rep


def test_gen_curve(curve13, tmp_path):
    doc = json.loads(curve13.read_text())
    assert len(doc["quadrics"]) == 55 and doc["genus"] == 13 and doc["seed"] == 42
    again = tmp_path / "again.json"
    assert cli.main(["gen-curve", "--genus", "13", "--seed", "42", "--out", str(again)]) == 0
    assert again.read_bytes() == curve13.read_bytes()


@pytest.mark.parametrize("argv", [
    ["gen-curve", "--genus", "8", "--out", "x.json"],
    ["gen-curve", "--genus", "13", "--prime", "10005", "--out", "x.json"],
    ["betti-delta"],
    ["sweep", "--genus-list", ""],
    ["no-such-command"],
    ["oracle", "--in", "missing.json"],
])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(argv) == cli.EXIT_USAGE
    assert not (tmp_path / "x.json").exists()


def test_betti_delta(capsys):
    code, rep = run_json(capsys, ["betti-delta", "--genus", "13"])
    out = rep["outputs"]
    assert code == 0
    assert (out["dim_ker"], out["betti_C"], out["betti_X"], out["type"]) == (6, 222, 216, "II")
    assert out["second_prime"]["agree"]
    (cert,) = out["certificates"]
    assert cert["verified"] and cert["applied"]
    code, rep = run_json(capsys, ["betti-delta", "--genus", "11", "--no-second-prime"])
    assert code == 0 and rep["outputs"]["dim_ker"] == 0


def test_betti_delta_from_file(curve13, capsys):
    code, rep = run_json(capsys, ["betti-delta", "--in", str(curve13), "--table"])
    assert code == 0 and rep["outputs"]["dim_ker"] == 6
    assert rep["outputs"]["betti_table"][1][6] == 222 and rep["outputs"]["table_dual"]
    assert rep["inputs"]["seed"] == 42


def test_betti_delta_window(capsys):
    assert cli.main(["betti-delta", "--genus", "9"]) == cli.EXIT_WINDOW
    assert "min b_i = 1 < j = 2" in capsys.readouterr().out


def test_oracle(curve13, capsys):
    code, rep = run_json(capsys, ["oracle", "--in", str(curve13)])
    assert code == 0
    res = {r["p"]: r for r in rep["outputs"]["results"]}
    assert res[1]["koszul"] == 55 and res[1]["agree"]
    assert res[2]["agree"]
    assert cli.main(["oracle", "--in", str(curve13), "--p", "6"]) == cli.EXIT_USAGE


def test_oracle_budget(curve13, capsys):
    code, rep = run_json(capsys, ["oracle", "--in", str(curve13), "--p", "2", "--memory-budget", "1000"])
    assert code == cli.EXIT_CHECK
    assert "budget" in rep["outputs"]["results"][0]["error"]


def test_sweep_certificates(capsys):
    code, rep = run_json(capsys, ["sweep", "--genus-list", "21-41:2,28,30"])
    assert code == 0
    rows = rep["outputs"]["rows"]
    assert [r["genus"] for r in rows] == list(range(21, 42, 2)) + [28, 30]
    assert all(r["status"] == "verified" for r in rows)
    code, rep = run_json(capsys, ["sweep", "--genus-list", "43", "--shift", "1"])
    assert code == 0 and rep["outputs"]["rows"][0]["status"] == "verified"


def test_sweep_full_small(capsys):
    code, rep = run_json(capsys, ["sweep", "--genus-list", "11,13", "--mode", "full"])
    assert code == 0
    r11, r13 = rep["outputs"]["rows"]
    assert r11["status"] == "below-threshold" and r11["dim_ker"] == 0
    assert r13["status"] == "verified" and r13["dim_ker"] == 6 and r13["applied"]


def test_sweep_reports_row_failures(capsys):
    # genus 9 has no scalar window; the sweep keeps going
    code, rep = run_json(capsys, ["sweep", "--genus-list", "9,13"])
    assert code == 0
    assert [r["status"] for r in rep["outputs"]["rows"]] == ["not-applicable", "verified"]


@pytest.mark.parametrize("g,expect", [(13, None), (26, "certificate"), (28, None)])
def test_verify(g, expect, capsys):
    code, rep = run_json(capsys, ["verify", "--genus", str(g)])
    assert code == 0, rep
    checks = {c["check"]: c for c in rep["outputs"]["checks"]}
    if expect:
        assert checks[expect]["expected_failure"]
    if g == 13:
        assert checks["betti_delta"]["detail"]["dim_ker"] == 6
        assert checks["oracle_p1"]["ok"] and checks["oracle_p2"]["ok"] and checks["duality"]["ok"]
    if g == 28:
        assert checks["extra_syzygies"]["detail"]["via"] == "certificate"


def test_verify_window():
    assert cli.main(["verify", "--genus", "9"]) == cli.EXIT_WINDOW


def test_prime_environment(monkeypatch, capsys):
    monkeypatch.setenv(cli.PRIME_ENV, "10009")
    code, rep = run_json(capsys, ["betti-delta", "--genus", "11", "--no-second-prime"])
    assert rep["inputs"]["prime"] == 10009


def test_report_is_replayable(capsys):
    _, a = run_json(capsys, ["sweep", "--genus-list", "23"])
    _, b = run_json(capsys, ["sweep", "--genus-list", "23"])
    assert a["config_hash"] == b["config_hash"] and a["outputs"] == b["outputs"]
    _, c = run_json(capsys, ["sweep", "--genus-list", "23", "--seed", "1"])
    assert c["config_hash"] != a["config_hash"]


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "fivegonal.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("fivegonal ")
