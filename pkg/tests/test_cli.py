import csv
import io
import json
import shutil
import subprocess
import sys
from math import sqrt

import pytest

from freefock.cli import main, render


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_projection_table(capsys):
    code, out, _ = run(capsys, "converge-projection", "--f", "x-on-unit", "--n-list", "2,4,8,16", "--assert")
    assert code == 0
    rows = table(out)
    assert [int(r["n"]) for r in rows] == [2, 4, 8, 16]
    for r in rows:
        assert float(r["error"]) == pytest.approx(1 / (int(r["n"]) * sqrt(12)), abs=1e-11)


def test_clt_assert_passes(capsys):
    code, out, err = run(capsys, "clt", "--n-list", "1,2,4,8", "--k-max", "6", "--t", "1",
                         "--assert", "--tol", "1e-9")
    assert code == 0 and not err
    rows = table(out)
    assert len(rows) == 24
    assert set(rows[0]) == {"n", "k", "operator", "oracle", "limit", "diff"}


def test_poisson_table(capsys):
    code, out, _ = run(capsys, "poisson", "--n-list", "1,2", "--k-max", "4", "--assert")
    assert code == 0
    rows = table(out)
    # two free steps of mean 1 at n = 1
    assert float(rows[0]["oracle"]) == pytest.approx(2.0)


def test_multiplicity_demo(capsys):
    code, out, _ = run(capsys, "multiplicity-demo", "--assert")
    assert code == 0
    rows = table(out)
    norms = {r["pair"]: float(r["measured"]) for r in rows if r["quantity"] == "commutator_norm"}
    assert norms["Z"] == 0 and norms["Y"] > 0
    z = [r for r in rows if r["pair"] == "Z" and r["quantity"] == "tau"]
    assert len(z) == 28
    assert all(abs(float(r["measured"]) - float(r["expected"])) <= 1e-12 for r in z)


def test_freeness_and_oracle(capsys):
    code, out, _ = run(capsys, "freeness", "--trials", "50", "--assert", "--tol", "1e-10")
    assert code == 0 and len(table(out)) == 50
    code, out, _ = run(capsys, "oracle", "--k-max", "6", "--rate", "0.5", "--assert", "--tol", "1e-6")
    assert code == 0
    assert [int(r["nc_count"]) for r in table(out)] == [1, 2, 5, 14, 42, 132]


def test_operator_run_reports_bound(capsys):
    code, out, _ = run(capsys, "converge-operator", "--f", "exp-decay", "--eps", "+", "--t", "1/2",
                       "--n-list", "2,4,8", "--assert")
    assert code == 0
    for r in table(out):
        assert float(r["error"]) <= float(r["bound"]) + 1e-10
    code, out, _ = run(capsys, "converge-operator", "--f", "vacuum", "--eps", "0,0", "--t", "1/3",
                       "--n-list", "2,4", "--mesh", "12")
    assert code == 0
    assert [float(r["t_n"]) for r in table(out)] == [0.5, 0.5]


def test_json_output(capsys, tmp_path):
    target = tmp_path / "rows.json"
    code, out, _ = run(capsys, "oracle", "--k-max", "3", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    rows = json.loads(target.read_text())
    assert [r["catalan"] for r in rows] == [1, 2, 5]
    code, out, _ = run(capsys, "converge-projection", "--f", "vacuum", "--n-list", "2", "--format", "json")
    assert json.loads(out)[0]["error"] == 0


def test_deterministic_output(capsys):
    first = run(capsys, "freeness", "--trials", "20", "--seed", "7")[1]
    second = run(capsys, "freeness", "--trials", "20", "--seed", "7")[1]
    assert first == second
    other = run(capsys, "freeness", "--trials", "20", "--seed", "8")[1]
    assert first != other


def test_assertion_failure_names_row(capsys):
    code, _, err = run(capsys, "clt", "--n-list", "2", "--k-max", "4", "--assert", "--tol", "-1")
    assert code == 2
    assert "FAIL clt: n=2 k=1" in err and "tol=" in err
    # without --assert the same run succeeds
    assert run(capsys, "clt", "--n-list", "2", "--k-max", "4", "--tol", "-1")[0] == 0


@pytest.mark.parametrize("argv", [
    ["converge-projection", "--n-list", "3", "--mesh", "4"],
    ["converge-operator", "--t", "1/3", "--n-list", "2", "--mesh", "4"],
    ["clt", "--k-max", "13"],
    ["clt", "--k-max", "6", "--depth", "4"],
    ["oracle", "--rate", "0"],
    ["freeness", "--sites", "1"],
    ["converge-projection", "--n-list", "zero"],
    ["no-such-command"],
])
def test_config_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 1


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("FREEFOCK_MESH", "6")
    assert run(capsys, "converge-projection", "--f", "vacuum", "--n-list", "4")[0] == 1
    assert run(capsys, "converge-projection", "--f", "vacuum", "--n-list", "3")[0] == 0
    monkeypatch.setenv("FREEFOCK_MESH", "x")
    assert run(capsys, "converge-projection", "--f", "vacuum", "--n-list", "2")[0] == 1
    monkeypatch.delenv("FREEFOCK_MESH")
    monkeypatch.setenv("FREEFOCK_DEPTH", "2")
    assert run(capsys, "clt", "--k-max", "3")[0] == 1


def test_render_formats():
    rows = [{"n": 2, "error": 1 / 3, "bound": None}]
    assert render(rows, "csv") == "n,error,bound\n2,0.333333333333,\n"
    assert json.loads(render(rows, "json")) == [{"n": 2, "error": 0.333333333333, "bound": None}]
    assert render([], "csv") == ""


@pytest.mark.skipif(shutil.which("freefock") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["freefock", "oracle", "--k-max", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("k,nc_count")
