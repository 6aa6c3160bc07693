"""Main CLI entry point for octode"""

import logging
import sys
import traceback
from functools import wraps
from typing import Optional

import click
from dotenv import load_dotenv

from .algebra import CdNum, Path, format_basis, format_cdnum, multiplication_table
from .calculus import IntegralMode, line_integral
from .cli import (
    FAIL,
    OK,
    WARN,
    error_payload,
    load_problem_file,
    passed,
    render_series,
    render_solve,
    series_payload,
    solve_report,
    to_json,
    to_ode_problem,
    to_series_problem,
)
from .config import get_context
from .functions import RootKind, cd_exp, cd_ln, polar_decompose, sqrt_set
from .odes import CLOSED_FORM_TOL, ImplicitResult, Solution, attach_residual, solve_problem
from .phrase import parse_expression, parse_point
from .series import cauchy_series_solve

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

EXIT_FAILED = 1


def _guarded(command):
    """Turn library errors into a message (or error JSON) and exit code 1."""

    @wraps(command)
    def wrapper(*args, **kwargs):
        as_json = kwargs.get("as_json", False)
        try:
            return command(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except KeyboardInterrupt:
            click.echo("\n\nInterrupted by user", err=True)
            sys.exit(EXIT_FAILED)
        except Exception as e:
            if as_json:
                click.echo(to_json(error_payload(e)))
            else:
                click.echo(f"{FAIL} Error: {e}", err=True)
            if logging.getLogger().isEnabledFor(logging.DEBUG):
                traceback.print_exc()
            sys.exit(EXIT_FAILED)

    return wrapper


json_option = click.option("--json", "as_json", is_flag=True, help="Print the machine-readable JSON report")
level_option = click.option(
    "--level", default=2, type=click.IntRange(1, 4), show_default=True, help="Algebra level r (2^r dimensions)"
)


def _point(text: str, level: int) -> CdNum:
    value = parse_point(text, level)
    return value.promote(max(level, value.level))


def _finish(ok: bool) -> None:
    if not ok:
        sys.exit(EXIT_FAILED)


@click.group()
@click.option("--debug", is_flag=True, help="Log at DEBUG level and print tracebacks")
def cli(debug: bool):
    """Cayley-Dickson calculus and differential equation solvers."""
    if debug:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@click.argument("problem_path", type=click.Path(exists=True, dir_okay=False))
@json_option
@_guarded
def solve(problem_path: str, as_json: bool):
    """
    Solve the equation described in PROBLEM_PATH and verify it on the grid.

    Exits 0 iff every grid point evaluates and the max residual is within
    the solver's tolerance.
    """
    problem_file = load_problem_file(problem_path)
    problem = to_ode_problem(problem_file)
    if not as_json:
        click.echo(f"Solving {problem.kind.value} problem over A_{problem.level}...")
    result = solve_problem(problem, problem_file.grid, get_context())
    report = solve_report(result)
    if as_json:
        click.echo(to_json(report))
    else:
        click.echo(render_solve(report, result.special))
    _finish(passed(report))


@cli.command()
@click.argument("problem_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("solution_expr")
@click.option("--tolerance", default=CLOSED_FORM_TOL, type=float, show_default=True, help="Residual tolerance")
@json_option
@_guarded
def check(problem_path: str, solution_expr: str, tolerance: float, as_json: bool):
    """
    Verify SOLUTION_EXPR, an expression in z, against PROBLEM_PATH.
    """
    problem_file = load_problem_file(problem_path)
    problem = to_ode_problem(problem_file)
    phrase = parse_expression(solution_expr, problem.level)
    solution = Solution.from_phrase(problem.kind, phrase, tolerance)
    attach_residual(problem, solution, problem_file.grid, get_context())
    report = solve_report(ImplicitResult(solution))
    if as_json:
        click.echo(to_json(report))
    else:
        click.echo(render_solve(report))
    _finish(passed(report))


@cli.command()
@click.argument("expr")
@click.option("--from", "start", required=True, help="Start point, e.g. 0 or 1+e1")
@click.option("--to", "end", required=True, help="End point")
@click.option("--path", "via", default=None, help="Intermediate nodes separated by ';'")
@click.option(
    "--mode",
    type=click.Choice([m.value for m in IntegralMode] + ["both"]),
    default=IntegralMode.SYMBOLIC.value,
    show_default=True,
    help="Primitive difference, quadrature of the hat operator, or both",
)
@level_option
@json_option
@_guarded
def integrate(expr: str, start: str, end: str, via: Optional[str], mode: str, level: int, as_json: bool):
    """Line integral of EXPR along the polyline from --from to --to."""
    ctx = get_context()
    phrase = parse_expression(expr, level)
    level = max(level, phrase.level)
    nodes = [_point(start, level)]
    if via:
        nodes += [_point(node, level) for node in via.split(";") if node.strip()]
    nodes.append(_point(end, level))
    level = max(node.level for node in nodes)
    path = Path.polyline([node.promote(level) for node in nodes])

    modes = [IntegralMode.SYMBOLIC, IntegralMode.QUADRATURE] if mode == "both" else [IntegralMode(mode)]
    values = {m.value: line_integral(phrase, path, m, ctx) for m in modes}
    if as_json:
        click.echo(to_json({name: format_cdnum(value) for name, value in values.items()}))
    elif len(values) == 1:
        click.echo(format_cdnum(next(iter(values.values()))))
    else:
        for name, value in values.items():
            click.echo(f"{name}: {format_cdnum(value)}")
        gap = abs(values["symbolic"] - values["quadrature"])
        click.echo(f"{OK if gap <= 1e-8 else WARN} modes agree to {gap:.3e}")


@cli.command(name="eval")
@click.argument("expr")
@click.option("--at", "at", required=True, help="Point, e.g. 1+e1 or (1,0,0,0)")
@level_option
@json_option
@_guarded
def eval_command(expr: str, at: str, level: int, as_json: bool):
    """Evaluate EXPR at a point."""
    phrase = parse_expression(expr, level)
    point = _point(at, max(level, phrase.level))
    value = phrase(point.promote(max(point.level, phrase.level)))
    if as_json:
        click.echo(to_json({"value": format_cdnum(value), "coeffs": value.coeffs.tolist()}))
    else:
        click.echo(format_cdnum(value))


@cli.command()
@click.argument("r", type=click.IntRange(0, 4))
@json_option
@_guarded
def table(r: int, as_json: bool):
    """Print the signed multiplication table of the basis of A_R."""
    signs, indices = multiplication_table(r)
    rows = [[format_basis(int(s), int(i)) for s, i in zip(srow, irow)] for srow, irow in zip(signs, indices)]
    if as_json:
        click.echo(to_json({"level": r, "table": rows}))
        return
    width = max(len(cell) for row in rows for cell in row) + 1
    header = " " * 5 + "".join(f"e{k}".rjust(width) for k in range(len(rows)))
    click.echo(header)
    for j, row in enumerate(rows):
        click.echo(f"e{j}".ljust(5) + "".join(cell.rjust(width) for cell in row))


@cli.command()
@click.argument("problem_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--order", default=12, type=click.IntRange(1, 64), show_default=True, help="Truncation order")
@json_option
@_guarded
def series(problem_path: str, order: int, as_json: bool):
    """Power-series solution of the Cauchy problem in PROBLEM_PATH."""
    problem = to_series_problem(load_problem_file(problem_path))
    solution = cauchy_series_solve(problem, order, ctx=get_context())
    if as_json:
        click.echo(to_json(series_payload(solution, order)))
    else:
        click.echo(render_series(solution, order))
    _finish(solution.report.passed)


@cli.command()
@click.argument("name", type=click.Choice(["exp", "ln", "sqrt", "polar"]))
@click.option("--at", "at", required=True, help="Point, e.g. 1+e1")
@level_option
@json_option
@_guarded
def fn(name: str, at: str, level: int, as_json: bool):
    """Evaluate an elementary function at a point."""
    ctx = get_context()
    z = _point(at, level)
    if name == "exp":
        payload = {"value": format_cdnum(cd_exp(z))}
    elif name == "ln":
        payload = {"value": format_cdnum(cd_ln(z, ctx))}
    elif name == "polar":
        polar = polar_decompose(z, ctx)
        payload = {
            "modulus": polar.modulus,
            "axis": format_cdnum(polar.axis),
            "angle": polar.angle,
            "axis_ambiguous": polar.axis_ambiguous,
        }
    else:
        roots = sqrt_set(z, ctx)
        if roots.kind is RootKind.SPHERE:
            payload = {"kind": roots.kind.value, "center": format_cdnum(roots.center), "radius": roots.radius}
        else:
            payload = {"kind": roots.kind.value, "roots": [format_cdnum(p) for p in roots.points]}

    if as_json:
        click.echo(to_json(payload))
    else:
        for key in sorted(payload):
            value = payload[key]
            click.echo(f"{key}: {', '.join(value) if isinstance(value, list) else value}")


main = cli


if __name__ == "__main__":
    cli()
