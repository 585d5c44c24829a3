from __future__ import annotations

import json
import math
import subprocess
import sys

import pytest

from multmeasure.cli import TOL_ENV, main


def run(capsys, *argv: str) -> tuple[int, str, str]:
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


class TestMeasure:
    def test_exact_components(self, capsys):
        status, out, _ = run(capsys, "measure", "union([1,2],[3,6])")
        assert status == 0
        assert out.strip() == '{"value":"4/1","method":"ExactComponents"}'

    def test_infinite(self, capsys):
        status, out, _ = run(capsys, "measure", "(0,1)")
        assert status == 0 and json.loads(out)["value"] == "inf"

    def test_float_and_log_domain(self, capsys):
        _, out, _ = run(capsys, "measure", "[1,2] U [3,6]", "--float")
        assert float(json.loads(out)["value"]) == pytest.approx(4.0, rel=1e-15)
        _, out, _ = run(capsys, "measure", "[1,2] U [3,6]", "--log-domain")
        assert json.loads(out)["value"] == "log(4/1)"
        _, out, _ = run(capsys, "measure", "[1,2] U [3,6]", "--log-domain", "--float")
        assert float(json.loads(out)["value"]) == pytest.approx(math.log(4), rel=1e-15)
        _, out, _ = run(capsys, "measure", "cantor_stage(1, 1)", "--log-domain")
        assert json.loads(out)["value"] == "2/3"

    def test_log_space_set(self, capsys):
        _, out, _ = run(capsys, "measure", "cantor_stage(1, 1)")
        assert json.loads(out)["value"] == "exp(2/3)"

    def test_telescoping_family(self, capsys):
        status, out, _ = run(capsys, "measure", "telescoping()")
        rep = json.loads(out)
        assert status == 0
        assert rep["method"] == "GeneratorLimit" and rep["certificate"]["routes_agree"]
        assert abs(math.log(float(_decimal(rep["value"]))) - math.log(2)) <= 1e-10

    def test_geometric_family_diverges(self, capsys):
        status, out, _ = run(capsys, "measure", "geometric(4, 2)")
        assert status == 0 and json.loads(out)["value"] == "inf"

    def test_tolerance_flag(self, capsys):
        _, out, _ = run(capsys, "measure", "telescoping()", "--tol", "1e-4")
        assert json.loads(out)["certificate"]["tolerance"] == 1e-4

    def test_tolerance_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv(TOL_ENV, "1e-5")
        _, out, _ = run(capsys, "measure", "telescoping()")
        assert json.loads(out)["certificate"]["tolerance"] == 1e-5
        monkeypatch.setenv(TOL_ENV, "-3")
        status, _, err = run(capsys, "measure", "[1,2]")
        assert status == 2 and TOL_ENV in json.loads(err)["error"]["message"]

    def test_repeat_runs_are_identical(self, capsys):
        outs = [run(capsys, "measure", "telescoping()")[1] for _ in range(2)]
        assert outs[0] == outs[1]


def _decimal(value: str) -> float:
    if value.startswith("exp("):
        return math.exp(float(value[4:-1]))
    num, _, den = value.partition("/")
    return float(num) / float(den or 1)


class TestErrors:
    def test_domain_error_is_located(self, capsys):
        status, out, err = run(capsys, "measure", "[2,1]")
        assert status == 2 and out == ""
        e = json.loads(err)["error"]
        assert e["type"] == "ExprDomainError" and (e["line"], e["column"]) == (1, 1)

    def test_syntax_error(self, capsys):
        status, _, err = run(capsys, "eval", "union([1,2]")
        e = json.loads(err)["error"]
        assert status == 2 and e["type"] == "ExprSyntaxError" and e["column"] == 12

    def test_usage_errors(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2
        assert run(capsys)[0] == 2
        assert run(capsys, "cover", "[1,2]")[0] == 2
        assert run(capsys, "verify", "--trials", "0")[0] == 2
        assert run(capsys, "verify", "--suite", "nope")[0] == 2

    def test_cover_rejects_families(self, capsys):
        status, _, err = run(capsys, "cover", "telescoping()", "--epsilon", "1/2")
        assert status == 2 and json.loads(err)["error"]["type"] == "UsageError"

    def test_epsilon_out_of_range(self, capsys):
        status, _, err = run(capsys, "cover", "[1,2]", "--epsilon", "1")
        assert status == 2 and json.loads(err)["error"]["type"] == "EpsilonOutOfRange"


class TestCover:
    def test_greedy_cover_report(self, capsys):
        status, out, _ = run(capsys, "cover", "[1,2] U [3,6]", "--epsilon", "1/2")
        rep = json.loads(out)
        assert status == 0 and rep["within_bound"]
        assert rep["epsilon"] == "1/2" and rep["bound"] == "6/1"
        assert rep["target"] == "[1,2] U [3,6]"

    def test_infinite_target(self, capsys):
        status, _, err = run(capsys, "cover", "(0,1)", "--epsilon", "1/2")
        assert status == 2 and json.loads(err)["error"]["type"] == "InfiniteMeasure"


class TestVerify:
    def test_lambda_suite(self, capsys):
        status, out, _ = run(capsys, "verify", "--suite", "lambda", "--trials", "100", "--seed", "42")
        rep = json.loads(out)
        assert status == 0 and rep["passed"] and rep["results"][0]["trials"] == 100

    def test_deterministic(self, capsys):
        args = ("verify", "--suite", "algebra", "--trials", "20", "--seed", "3")
        assert run(capsys, *args)[1] == run(capsys, *args)[1]


class TestEval:
    def test_set(self, capsys):
        _, out, _ = run(capsys, "eval", "diff([1,4], (2,3))")
        assert json.loads(out) == {"type": "IntervalSet", "value": "[1,2] U [3,4]"}

    def test_pretty(self, capsys):
        _, out, _ = run(capsys, "--pretty", "eval", "[1,2]")
        assert out.startswith("{\n  ") and json.loads(out)["value"] == "[1,2]"
        _, out2, _ = run(capsys, "eval", "[1,2]", "--pretty")
        assert out2 == out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "multmeasure", "measure", "union([1,2],[3,6])"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == '{"value":"4/1","method":"ExactComponents"}'
