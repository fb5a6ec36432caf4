import json
import subprocess
import sys

import pytest

from metaweil.cli import main
from metaweil.suites import Report, RunConfig, UsageError, dump_table, run_suite


def run(args, capsys):
    code = main(args)
    return code, capsys.readouterr()


def test_verify_exit_zero(capsys):
    code, out = run(["verify", "maslov-identities", "--d", "1", "--q", "3"], capsys)
    assert code == 0
    rep = json.loads(out.out)
    assert rep["status"] == "pass"
    assert {c["name"] for c in rep["checks"]} >= {"gamma_antisymmetry", "gamma_quadruple", "gamma_invariance"}


def test_usage_errors(capsys):
    assert run(["verify", "strata", "--q", "9"], capsys)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2
    assert run(["p1", "theta", "--n", "2", "--degrees=-2", "--q", "3"], capsys)[0] == 2
    with pytest.raises(UsageError):
        run_suite(RunConfig(suite="bogus"))


def test_guard_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("METAWEIL_LIMIT", "10")
    code, out = run(["p1", "sweep", "--n", "1", "--min-deg", "-4", "--q", "3"], capsys)
    assert code == 2
    assert "exceeds limit" in out.err


def test_failing_check_gives_exit_one(capsys, monkeypatch):
    from metaweil import suites
    from metaweil.suites import Check

    def broken(cfg):
        rep = Report("strata", {})
        rep.run("always_fails", lambda: Check("", False, 1, {"b": [[0]]}))
        return rep

    monkeypatch.setitem(suites.RUNNERS, "strata", broken)
    code, out = run(["verify", "strata"], capsys)
    assert code == 1
    chk = json.loads(out.out)["checks"][0]
    assert chk["status"] == "fail" and chk["counterexample"] == {"b": [[0]]}


def test_table_sizes():
    assert len(dump_table("gamma", RunConfig(d=1, q=3))) == 64
    assert len(dump_table("theta", RunConfig(d=1, q=3))) == 36
    cyc = dump_table("cocycle", RunConfig(d=1, q=3))
    assert len(cyc["table"]) == 576 and len(cyc["splitting"]) == 24
    assert len(dump_table("strata-fn", RunConfig(d=2, q=3, fn="s"))) == 27


def test_strata_and_p1_commands(capsys, tmp_path):
    code, out = run(["strata", "table", "--d", "1", "--q", "5", "--fn", "l1"], capsys)
    assert code == 0 and len(json.loads(out.out)) == 5
    ext = tmp_path / "e.json"
    ext.write_text(json.dumps({"q": 3, "degrees": [-4], "components": [{"i": 0, "j": 0, "coeffs": [1, 0, 0, 0, 0]}]}))
    code, out = run(["p1", "theta", "--n", "1", "--degrees=-4", "--q", "3", "--ext", str(ext)], capsys)
    rec = json.loads(out.out)
    assert code == 0 and rec["corank"] == 2 and rec["h0_of_M"] == 2
    code, out = run(["p1", "sweep", "--n", "1", "--min-deg", "-3", "--q", "3"], capsys)
    lines = out.out.strip().splitlines()
    assert code == 0 and len(lines) == 31
    assert json.loads(lines[-1])["summary"]["records"] == 30


def test_out_file_and_figures(tmp_path, capsys):
    out = tmp_path / "r.json"
    figs = tmp_path / "figs"
    code, _ = run(["verify", "strata", "--d", "1", "--q", "3", "--out", str(out), "--figures", str(figs)], capsys)
    assert code == 0 and json.loads(out.read_text())["suite"] == "strata"
    assert (figs / "strata-checks.png").stat().st_size > 0
    run(["table", "strata-fn", "--d", "1", "--q", "3", "--fn", "four-l0", "--figures", str(figs)], capsys)
    run(["p1", "sweep", "--n", "1", "--min-deg", "-3", "--q", "3", "--figures", str(figs)], capsys)
    assert (figs / "strata-four-l0-d1-q3.png").exists() and (figs / "p1-weights.png").exists()


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "metaweil.cli", "verify", "cocycle", "--q", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["status"] == "pass"
