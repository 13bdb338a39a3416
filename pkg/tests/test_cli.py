import json
import subprocess
import sys
from pathlib import Path

import pytest

from paraprod.cli import run

GOLDEN = Path(__file__).parent / "golden"

CASES = [
    (["table", "--space", "bergman"], "table_bergman.json"),
    (["table", "--space", "hardy"], "table_hardy.json"),
    (["normalize", "T*S", "--json"], "normalize_TS.json"),
    (["normalize", "M^2"], "normalize_M2.txt"),
    (["normalize", "1/4*T(g^2)^2", "--latex"], "normalize_intro.tex"),
    (["classify", "S*T^2", "--space", "hardy"], "classify_ST2_hardy.json"),
    (["classify", "S*T + S*T^2", "--space", "hardy"], "classify_open_hardy.json"),
    (["classify", "d0{w*u^3} + M - S - T", "--space", "bergman", "--alpha", "1"], "classify_trivial.json"),
]


def cli(*args):
    return subprocess.run([sys.executable, "-m", "paraprod", *args], capture_output=True, text=True)


@pytest.mark.parametrize("argv, name", CASES)
def test_golden(argv, name, capsys):
    assert run(argv) == 0
    assert capsys.readouterr().out == (GOLDEN / name).read_text()


def test_byte_stable_across_processes():
    a = cli("table", "--space", "hardy")
    b = cli("table", "--space", "hardy")
    assert a.returncode == 0 and a.stdout == b.stdout == (GOLDEN / "table_hardy.json").read_text()


def test_classify_provenance():
    data = json.loads((GOLDEN / "classify_ST2_hardy.json").read_text())
    assert data["verdict"] == "uncovered"
    assert data["provenance"][0]["theorem"] == "log-kernel-counterexample"


@pytest.mark.parametrize(
    "argv",
    [
        ["normalize", "T^0"],
        ["normalize", ""],
        ["normalize", "S*"],
        ["classify", "T", "--space", "banach"],
        ["frobnicate"],
        ["eval", "T", "--f", "1", "--exact"],
        ["normalize", "(M+S)^12", "--max-terms", "5"],
    ],
)
def test_usage_errors_exit_1(argv, capsys):
    try:
        code = run(argv)
    except SystemExit as e:
        code = e.code
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_main_exit_codes():
    assert cli("normalize", "T^0").returncode == 1
    r = cli("experiment", "counterexample-growth")
    assert r.returncode == 2
    assert json.loads(r.stdout)["verdict"] == "fail"


def test_eval(capsys):
    assert run(["eval", "S*T", "--f", "1", "--g", "1+z", "--exact"]) == 0
    assert json.loads(capsys.readouterr().out)["coefficients"] == ["0", "1", "1/2"]
    assert run(["eval", "T", "--f", "1", "--series", "log", "--N", "4"]) == 0
    out = json.loads(capsys.readouterr().out)["coefficients"]
    assert [c[0] for c in out] == pytest.approx([0, 1, 0.5, 1 / 3, 0.25])


def test_norm_and_opnorm(capsys):
    assert run(["norm", "--kind", "hardy", "--f", "1+z"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(2**0.5)
    assert run(["norm", "--kind", "bloch", "--f", "log"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["grid_lower_bound"] and 1.9 < data["value"] <= 2
    assert run(["opnorm", "T", "--g", "z", "--trunc", "200"]) == 0
    assert json.loads(capsys.readouterr().out)["norm"] == pytest.approx(2**-0.5, abs=1e-3)


def test_verify_and_csv(capsys):
    assert run(["verify", "determinants", "--m-max", "3", "--n-max", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "pass"
    assert run(["experiment", "vmoa-probe", "--a", "0,0.9,0.99", "--K", "1024", "--csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("garsia") and len(lines) == 4
