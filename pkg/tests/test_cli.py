"""Tests for the octode command line"""

import json

import pytest
from click.testing import CliRunner

from src.main import cli


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _json(output: str) -> dict:
    """The JSON document at the end of the output; warnings may precede it."""
    start = 0 if output.startswith("{") else output.index("\n{") + 1
    return json.loads(output[start:])


def test_table(runner):
    result = runner.invoke(cli, ["table", "2"])
    assert result.exit_code == 0
    assert "+e3" in result.output
    payload = _json(runner.invoke(cli, ["table", "2", "--json"]).output)
    assert payload["level"] == 2
    assert payload["table"][1][2] == "+e3"
    assert payload["table"][2][1] == "-e3"


def test_integrate(runner):
    result = runner.invoke(cli, ["integrate", "z", "--from", "0", "--to", "1"])
    assert result.exit_code == 0
    assert result.output.strip() == "0.5"


def test_integrate_both_modes(runner):
    result = runner.invoke(cli, ["integrate", "z^2*e1", "--from", "0", "--to", "1+e2", "--path", "e3", "--mode", "both"])
    assert result.exit_code == 0
    assert "symbolic:" in result.output and "quadrature:" in result.output
    assert "✓ modes agree" in result.output


def test_eval(runner):
    result = runner.invoke(cli, ["eval", "z^2", "--at", "e1"])
    assert result.exit_code == 0
    assert result.output.strip() == "-1.0"
    payload = _json(runner.invoke(cli, ["eval", "e1*z", "--at", "e2", "--json"]).output)
    assert payload["value"] == "1.0*e3"


def test_syntax_error_reports_position(runner):
    result = runner.invoke(cli, ["eval", "z + * 2", "--at", "1", "--json"])
    assert result.exit_code == 1
    payload = _json(result.output)
    assert payload["error"] == "ExpressionSyntaxError"
    assert payload["position"] == 4


def test_square_root_sphere(runner):
    result = runner.invoke(cli, ["fn", "sqrt", "--at", "-4", "--json"])
    assert result.exit_code == 0
    payload = _json(result.output)
    assert payload["kind"] == "sphere"
    assert payload["radius"] == pytest.approx(2.0)


def test_solve_clairaut_is_deterministic(runner, problems_dir):
    path = str(problems_dir / "clairaut_octonion.json")
    first = runner.invoke(cli, ["solve", path, "--json"])
    second = runner.invoke(cli, ["solve", path, "--json"])
    assert first.exit_code == 0
    assert first.output == second.output
    payload = _json(first.output)
    assert payload["kind"] == "clairaut"
    assert payload["singular_solution"] is not None
    assert payload["singular_max_residual"] < 1e-9


@pytest.mark.parametrize("name", ["linear_decay.json", "simplest_quaternion.json"])
def test_solve_problem_files(runner, problems_dir, name):
    result = runner.invoke(cli, ["solve", str(problems_dir / name)])
    assert result.exit_code == 0
    assert "✓ max residual" in result.output


def test_check_accepts_and_rejects(runner, problems_dir):
    path = str(problems_dir / "clairaut_octonion.json")
    good = runner.invoke(cli, ["check", path, "2*z - 1", "--json"])
    assert good.exit_code == 0
    assert _json(good.output)["max_residual"] < 1e-9
    wrong = runner.invoke(cli, ["check", path, "3*z"])
    assert wrong.exit_code == 1
    assert "✗" in wrong.output


def test_series(runner, problems_dir):
    result = runner.invoke(cli, ["series", str(problems_dir / "series_exp.json"), "--json"])
    assert result.exit_code == 0
    payload = _json(result.output)
    assert payload["coefficients"][0][:3] == ["1.0", "1.0", "0.5"]
    assert payload["max_residual"] <= payload["tolerance"]


def test_series_second_order(runner, problems_dir):
    result = runner.invoke(cli, ["series", str(problems_dir / "series_cos.json")])
    assert result.exit_code == 0
    assert "u0:" in result.output and "u1:" in result.output


def test_check_fails_when_no_point_evaluates(runner, tmp_path):
    problem = {
        "algebra_level": 2,
        "kind": "linear",
        "ingredients": {"b": "1", "Q": "0", "h": "1"},
        "grid": {"points": 20, "seed": 0, "radius": 1000.0},
    }
    path = tmp_path / "overflow.json"
    path.write_text(json.dumps(problem))
    result = runner.invoke(cli, ["check", str(path), "z^400", "--json"])
    assert result.exit_code == 1
    payload = _json(result.output)
    assert payload["grid_points"] == 0
    assert payload["verified"] is False
    assert len(payload["failures"]) == 20
