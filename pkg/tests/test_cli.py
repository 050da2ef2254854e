import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import CORPUS
from covercheck.cli import main
from covercheck.problem import load_problem

GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("COVERCHECK_UPDATE_GOLDEN") == "1"
SLOW_FILES = {"ml_degree_chart"}


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def normalized(text: str) -> str:
    report = json.loads(text)
    report["timing"]["seconds"] = 0
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def golden_cases():
    cases = []
    for path in sorted(CORPUS.glob("*.cov")):
        stem = path.stem
        slow = [pytest.mark.slow] if stem in SLOW_FILES else []
        cases.append(pytest.param(stem, "gb", None, id=f"{stem}-gb"))
        if stem in SLOW_FILES:
            cases.append(pytest.param(stem, "is-finite", None, id=f"{stem}-is-finite"))
            cases.append(pytest.param(stem, "is-flat", None, id=f"{stem}-is-flat"))
        else:
            cases.append(pytest.param(stem, "covering", None, id=f"{stem}-covering"))
        for point in load_problem(path).points:
            cases.append(pytest.param(stem, "fiber", point, id=f"{stem}-fiber-{point}",
                                      marks=slow))
    return cases


@pytest.mark.parametrize("stem,command,point", golden_cases())
def test_json_matches_golden(capsys, stem, command, point):
    argv = [command, CORPUS / f"{stem}.cov", "--json"]
    name = f"{stem}.{command}"
    if point:
        argv += ["--point", point]
        name += f".{point}"
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    got = normalized(out)
    target = GOLDEN / f"{name}.json"
    if UPDATE:
        GOLDEN.mkdir(exist_ok=True)
        target.write_text(got, encoding="utf-8")
    assert got.encode("utf-8") == target.read_bytes()


def test_covering_nodal_echoes_basis(capsys):
    code, out, _ = run_cli(capsys, "covering", CORPUS / "nodal.cov", "--json")
    report = json.loads(out)
    assert code == 0 and report["verdict"] == "COVERING"
    assert len(report["certificates"]["groebner_basis"]) == 6
    assert set(report) == {"command", "input", "options", "verdict", "certificates", "timing"}


def test_fiber_parabolas_origin(capsys):
    code, out, _ = run_cli(capsys, "fiber", CORPUS / "parabolas.cov", "--point", "origin")
    assert code == 0
    assert "verdict: length=4  distinct=2  real=2" in out


def test_is_finite_hyperbola_explains_missing_witness(capsys):
    code, out, _ = run_cli(capsys, "is-finite", CORPUS / "hyperbola_origin.cov", "--json")
    report = json.loads(out)
    assert code == 0 and report["verdict"] is False
    assert "y" in report["certificates"]["missing"]
    assert "power of y" in report["certificates"]["missing"]["y"]


def test_inline_point_and_form(capsys):
    code, out, _ = run_cli(capsys, "fiber", CORPUS / "nodal.cov", "--point", "y1=3,y2=6",
                           "--form", "1,1", "--json")
    report = json.loads(out)
    assert code == 0
    assert report["verdict"] == {"length": 2, "distinct": 2, "real": 2}
    assert report["certificates"]["separating_form"] == ["1", "1"]


def test_order_flag(capsys):
    code, out, _ = run_cli(capsys, "gb", CORPUS / "circle.cov", "--order", "lex", "--json")
    assert code == 0
    assert json.loads(out)["options"]["order"] == ["lex", "lex"]


def test_assume_reduced(capsys):
    code, out, _ = run_cli(capsys, "covering", CORPUS / "parabolas.cov", "--assume-reduced")
    assert code == 0 and "verdict: CRITERION_FAILS" in out


@pytest.mark.parametrize("argv", [
    ["covering", "missing.cov"],
    ["fiber", "nodal.cov"],
    ["fiber", "nodal.cov", "--point", "nowhere"],
    ["fiber", "nodal.cov", "--point", "y1=1,y2=1"],
    ["fiber", "nodal.cov", "--point", "y1=3,y2=6", "--form", "a,b"],
    ["gb", "nodal.cov", "--order", "deglex"],
    ["non-flat-locus", "hyperbola_origin.cov"],
    ["gb", "nodal.cov", "--timeout-seconds", "-1"],
])
def test_input_errors_exit_one(capsys, argv):
    argv = [str(CORPUS / a) if a.endswith(".cov") else a for a in argv]
    code, _, err = run_cli(capsys, *argv)
    assert code == 1 and "error" in err


def test_unknown_command_exit_status():
    proc = subprocess.run([sys.executable, "-m", "covercheck", "frobnicate",
                           str(CORPUS / "nodal.cov")], capture_output=True, text=True)
    assert proc.returncode == 1


def test_syntax_error_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.cov"
    bad.write_text("fiber: x\nbase: y\nideal: x^2 +\n")
    code, _, err = run_cli(capsys, "gb", bad)
    assert code == 1 and "line 3" in err


def test_non_separating_form_exits_two(capsys):
    code, _, err = run_cli(capsys, "fiber", CORPUS / "circle.cov", "--point", "east",
                           "--form", "0,1")
    assert code == 2 and "limit reached" in err


def test_timeout_exits_two(capsys):
    code, _, err = run_cli(capsys, "covering", CORPUS / "ml_degree_chart.cov",
                           "--timeout-seconds", "1")
    assert code == 2 and "timeout" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "covercheck", "is-finite",
                           str(CORPUS / "circle.cov")], capture_output=True, text=True)
    assert proc.returncode == 0 and "verdict: true" in proc.stdout
