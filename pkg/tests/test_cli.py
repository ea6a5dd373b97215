import json
import subprocess
import sys

import pytest

from maxbent import cli
from maxbent.field import REGISTRY_ENV


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_gold_niho(capsys):
    code, out, _ = run(capsys, "analyze", "--m", "2", "--func", "x^(2^m+1)")
    rep = json.loads(out)
    assert code == 0 and rep["is_maximal"] and rep["bent_count"] == 12


def test_analyze_identity(capsys):
    code, out, _ = run(capsys, "analyze", "--m", "2", "--func", "x")
    assert code == 0 and json.loads(out)["bent_count"] == 0


def test_analyze_binomial_not_maximal(capsys):
    code, out, _ = run(capsys, "analyze", "--m", "4", "--func", "x^(2^m+1)+x^(2^2+1)")
    assert code == 0 and not json.loads(out)["is_maximal"]


def test_analyze_csv_and_product(capsys):
    code, out, _ = run(capsys, "analyze", "--m", "3", "--product", "--func", "(y*Frob[1](z), z)",
                       "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "component,class" and len(lines) == 64
    assert sum(line.endswith(",bent") for line in lines) == 56


def test_analyze_construction_json(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "Binomial", "m": 3, "params": {"i": 0}}))
    code, out, _ = run(capsys, "analyze", "--func", f"@{spec}")
    assert code == 0 and json.loads(out)["bent_count"] == 56


@pytest.mark.parametrize("argv", [
    ["analyze", "--m", "2", "--func", "x^^2"],
    ["analyze", "--m", "2", "--func", "u9*x"],
    ["analyze", "--func", "x"],
    ["analyze", "--n", "4", "--modulus", "0x15", "--func", "x"],
    ["analyze", "--m", "2", "--func", "Tr[4/1](x)"],
    ["verify", "nosuch"],
    ["search", "binomials", "--n", "5"],
    ["search", "niho-k2"],
    ["construct", "--kind", "NihoK2"],
    ["construct", "--spec", "{\"kind\": \"Binomial\", \"m\": 3, \"params\": {\"i\": 7}}"],
    ["export", "spectrum", "--m", "2", "--func", "x^5"],
    ["analyze", "--m", "2", "--func", "x", "--jobs", "0"],
    ["bogus"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_verify_pass_and_stderr_summary(capsys):
    code, out, err = run(capsys, "verify", "wt", "--m", "3", "--trials", "20")
    assert code == 0
    assert json.loads(out)["passed"]
    assert err.startswith("PASS wt:")


def test_verify_bino_and_table1(capsys):
    code, out, _ = run(capsys, "verify", "bino", "--m-max", "5")
    assert code == 0
    code, out, _ = run(capsys, "verify", "table1", "--row", "gold", "--m", "5", "--e", "1")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert sorted(rep["assertions"][0]["detail"]["values"]) == [-8, 0, 8]


def test_verify_failure_exit_1_with_counterexample(capsys):
    code, out, err = run(capsys, "verify", "cor2", "--m-max", "2")
    rep = json.loads(out)
    assert code == 1 and "FAIL cor2" in err
    failed = [a for a in rep["assertions"] if not a["passed"]]
    assert failed and "nf" in failed[0]["detail"]


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "gauss-count", "--m-max", "6", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "suite,assertion,passed"


def test_search_binomials_csv(capsys, tmp_path):
    code, out, err = run(capsys, "search", "binomials", "--n", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n,d1,d2,bent_count,profile_tag" and len(lines) > 1
    assert "complete" in err


def test_search_checkpoint_via_cli(capsys, tmp_path):
    ck = tmp_path / "ck.json"
    _, full, _ = run(capsys, "search", "binomials", "--n", "6")
    code, _, err = run(capsys, "search", "binomials", "--n", "6", "--budget", "20", "--checkpoint", str(ck))
    assert code == 0 and "stopped" in err
    code, resumed, _ = run(capsys, "search", "binomials", "--n", "6", "--checkpoint", str(ck))
    assert code == 0 and resumed == full


def test_search_niho_k2(capsys):
    code, out, err = run(capsys, "search", "niho-k2", "--m", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "m,u1,u2" and len(lines) > 1


def test_construct_default_and_params(capsys):
    code, out, _ = run(capsys, "construct", "--kind", "NihoK2", "--m", "3", "--seed", "4")
    rep = json.loads(out)
    assert code == 0 and rep["bent_count"] == 56 and rep["is_maximal"]
    code, out, _ = run(capsys, "construct", "--kind", "Binomial", "--m", "3", "--params", '{"i": 1}', "--table")
    rep = json.loads(out)
    assert code == 0 and not rep["is_maximal"] and len(rep["table"]) == 64
    code, out2, _ = run(capsys, "construct", "--spec", json.dumps(rep["spec"]))
    assert json.loads(out2)["bent_count"] == rep["bent_count"]


@pytest.mark.parametrize("kind", ["TracePerm", "NihoGeneral", "NihoK2", "MM", "Binomial"])
def test_construct_every_kind_is_maximal_by_default(capsys, kind):
    code, out, _ = run(capsys, "construct", "--kind", kind, "--m", "3")
    assert code == 0 and json.loads(out)["is_maximal"]


def test_export_spectrum_and_delta(capsys):
    code, out, _ = run(capsys, "export", "spectrum", "--m", "2", "--func", "Tr[n/1](g*x^5)")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "w_hex,walsh" and len(lines) == 17
    assert {abs(int(line.split(",")[1])) for line in lines[1:]} == {4}
    code, out, _ = run(capsys, "export", "spectrum", "--m", "2", "--func", "x^5", "--component", "0x2")
    assert code == 0 and len(out.splitlines()) == 17
    code, out, _ = run(capsys, "export", "delta", "--m", "2", "--func", "x^5")
    assert out.splitlines() == ["delta,count", "0,180", "4,60"]


@pytest.mark.parametrize("argv", [
    ["analyze", "--m", "3", "--func", "x^(2^m+1)+x^3"],
    ["verify", "rt", "--m", "3"],
    ["search", "binomials", "--n", "6", "--jobs", "2"],
    ["construct", "--kind", "MM", "--m", "3", "--seed", "9"],
])
def test_byte_identical_reruns(tmp_path, argv):
    outs = []
    for i in range(2):
        path = tmp_path / f"out{i}"
        assert cli.main(argv + ["--output", str(path)]) in (0, 1)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] and outs[0]


def test_registry_env_override(capsys, tmp_path, monkeypatch):
    reg = tmp_path / "reg.txt"
    reg.write_text("4:0x19\n")
    monkeypatch.setenv(REGISTRY_ENV, str(reg))
    code, out, _ = run(capsys, "analyze", "--n", "4", "--func", "x^5")
    assert code == 0
    monkeypatch.setenv(REGISTRY_ENV, str(tmp_path / "missing.txt"))
    code, _, err = run(capsys, "analyze", "--n", "4", "--func", "x^5")
    assert code == 2 and "missing" in err


def test_registry_flag_changes_field(capsys, tmp_path):
    reg = tmp_path / "reg.txt"
    reg.write_text("4:0x19\n")
    _, default, _ = run(capsys, "export", "spectrum", "--n", "4", "--func", "Tr[4/1](g*x^3)")
    _, custom, _ = run(capsys, "export", "spectrum", "--n", "4", "--registry", str(reg), "--func",
                       "Tr[4/1](g*x^3)")
    assert default != custom


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "maxbent.cli", "analyze", "--m", "2", "--func", "x^5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["bent_count"] == 12
    proc = subprocess.run([sys.executable, "-m", "maxbent.cli", "verify", "nosuch"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
