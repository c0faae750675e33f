import json
import subprocess
import sys

import pytest

from jetdiff import cli
from jetdiff.numeric_eval import CheckReport


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_left_order_two(capsys):
    code, out, _ = run(capsys, "gen", "--order", "2", "--side", "left")
    assert code == 0
    assert out.splitlines() == [
        "+ y''/R[1,0]",
        "+ (y')^2/R[1,0] * [ -R[1,1]/R[1,0] + (R[0,1]/R[1,0])*R[2,0]/R[1,0] ]",
    ]


def test_gen_both_sides_separated(capsys):
    code, out, _ = run(capsys, "gen", "-k", "1")
    assert code == 0
    assert out.splitlines() == ["+ y'/R[1,0]", "=", "- x'/R[0,1]"]


def test_count_constants(capsys):
    code, out, _ = run(capsys, "count", "--order", "1", "--weight", "0", "--degree", "5")
    assert code == 0 and out == "1\n"


def test_count_breakdown(capsys):
    code, out, _ = run(capsys, "count", "-k", "2", "-m", "2", "-d", "5", "--breakdown")
    lines = out.splitlines()
    assert lines[0] == "18" and len(lines) == 3


def test_infinity_uniform(capsys):
    code, out, _ = run(capsys, "infinity", "--order", "3", "--degree", "6")
    assert code == 0
    assert out.splitlines()[0] == "uniform order 1"


def test_infinity_with_curve(capsys):
    code, out, _ = run(capsys, "infinity", "-k", "2", "-d", "5", "--curve", "x^5 + y^5 - 2")
    assert code == 0 and "PASS" in out


def test_infinity_degree_mismatch(capsys):
    code, _, err = run(capsys, "infinity", "-k", "2", "-d", "6", "--curve", "x^5 + y^5 - 2")
    assert code == 2 and "degree" in err


@pytest.mark.parametrize("argv", [
    ("faa", "-k", "5"),
    ("faa", "-k", "2", "--vars", "2"),
    ("triv", "-k", "3"),
    ("series", "-k", "3", "--curve", "x^2 + y^2 - 2", "--point", "1,1"),
    ("series", "-k", "2", "--curve", "x^2 + y^2 - 2", "--point", "1,1", "--side", "left", "--mode", "float"),
    ("eval", "-k", "3", "--curve", "x^6 + y^6 - 2", "--point", "1,1"),
    ("eval", "-k", "2", "--curve", "x^4 + y^4 - 2", "--point", "1,1", "--mode", "float", "--tol", "1e-8"),
    ("roundtrip", "-k", "4", "--curve", "x^7 + y^7 - 2", "--point", "1,1"),
    ("probe", "-k", "1", "--curve", "x^5 + y^5 - 2"),
    ("count", "-k", "3", "-m", "12", "-d", "7", "--asymptotic"),
])
def test_commands_succeed_and_emit_json(capsys, argv):
    code, text, _ = run(capsys, *argv)
    assert code == 0 and text.endswith("\n")
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert isinstance(payload, dict)


def test_eval_json_schema(capsys):
    _, out, _ = run(capsys, "eval", "-k", "2", "--curve", "x^4 + y^4 - 2", "--point", "1,1", "--format", "json")
    js = json.loads(out)
    assert set(js) >= {"check", "kappa", "curve", "point", "mode", "max_residual", "pass"}
    assert js["pass"] is True and js["point"] == ["1", "1"]


def test_probe_json_has_slope(capsys):
    _, out, _ = run(capsys, "probe", "-k", "1", "--curve", "x^4 + y^4 - 2", "--format", "json")
    js = json.loads(out)
    assert "slope" in js and "max_residual" not in js


@pytest.mark.parametrize("argv", [
    ("gen",),
    ("gen", "--order", "0"),
    ("gen", "--order", "two"),
    ("count", "-k", "1", "-m", "-1", "-d", "3"),
    ("eval", "-k", "1", "--curve", "x^4 + + y", "--point", "1,1"),
    ("eval", "-k", "1", "--curve", "x^4 + y^4 - 2", "--point", "1"),
    ("eval", "-k", "1", "--curve", "x^4 + y^4 - 2", "--point", "1,2"),
    ("eval", "-k", "1", "--curve", "x^4 + y^4 - 2", "--point", "1,1", "--mode", "float", "--tol", "-1"),
    ("probe", "-k", "3", "--curve", "x^4 + y^4 - 2"),
    ("nonsense",),
])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_check_failure_exits_one(capsys, monkeypatch):
    bad = CheckReport("agreement", 1, "x", ["1", "1"], "exact", False, 1.0)
    monkeypatch.setattr(cli, "check_generator_agreement", lambda *a, **k: bad)
    code, out, _ = run(capsys, "eval", "-k", "1", "--curve", "x^4 + y^4 - 2", "--point", "1,1")
    assert code == 1 and "FAIL" in out


@pytest.mark.parametrize("argv", [
    ["gen", "-k", "4", "--format", "json"],
    ["count", "-k", "3", "-m", "9", "-d", "6", "--breakdown"],
    ["probe", "-k", "3", "--curve", "x^6 + y^6 - 2"],
])
def test_deterministic_output(argv):
    cmd = [sys.executable, "-m", "jetdiff", *argv]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first.endswith(b"\n")
