"""Problem files and report rendering for the command line"""

from .problem_file import SERIES_KIND, load_problem_file, to_ode_problem, to_series_problem
from .report import (
    OK,
    WARN,
    FAIL,
    to_json,
    error_payload,
    solve_report,
    passed,
    render_solve,
    series_payload,
    render_series,
)

__all__ = [
    "SERIES_KIND",
    "load_problem_file",
    "to_ode_problem",
    "to_series_problem",
    "OK",
    "WARN",
    "FAIL",
    "to_json",
    "error_payload",
    "solve_report",
    "passed",
    "render_solve",
    "series_payload",
    "render_series",
]
