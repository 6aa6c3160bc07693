"""Text and JSON rendering of solver and series reports"""

import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from ..algebra import format_cdnum
from ..models import ResidualReport, SolveReport
from ..odes import ImplicitResult, Representation, Solution
from ..series import CauchySolution

OK, WARN, FAIL = "✓", "⚠", "✗"


def to_json(payload: Any) -> str:
    """Stable JSON: sorted keys, two-space indent, floats by repr."""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump()
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)


def error_payload(exc: Exception) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"error": type(exc).__name__, "message": str(exc)}
    position = getattr(exc, "position", None)
    if position is not None:
        payload["position"] = position
    return payload


def _singular(result: ImplicitResult) -> Optional[Solution]:
    """The special solution to report: a closed-form singular one if there is one."""
    closed = [s for s in result.special if s.representation is Representation.CLOSED_FORM]
    for solution in closed:
        if any("singular" in note for note in solution.branch_notes):
            return solution
    if closed:
        return closed[0]
    return result.special[0] if result.special else None


def solve_report(result: ImplicitResult) -> SolveReport:
    general = result.general
    residual = general.residual or ResidualReport(tolerance=general.tolerance)
    notes = list(general.branch_notes)
    report = SolveReport(
        kind=general.kind.value,
        max_residual=residual.max_residual,
        mean_residual=residual.mean_residual,
        tolerance=residual.tolerance,
        grid_points=len(residual.points),
        solution=general.expression,
        branch_notes=notes,
        failures=list(residual.failures),
        verified=result.verified,
    )
    singular = _singular(result)
    if singular is not None:
        report.singular_solution = singular.expression
        if singular.residual is not None:
            report.singular_max_residual = singular.residual.max_residual
    return report


def passed(report: SolveReport) -> bool:
    """Exit-code rule: some point evaluated, none failed, residual within tolerance."""
    return report.grid_points > 0 and not report.failures and report.max_residual <= report.tolerance


def render_solve(report: SolveReport, special: Optional[List[Solution]] = None) -> str:
    marker = OK if passed(report) else FAIL
    lines = [
        "=" * 50,
        f"{report.kind.upper()} SOLUTION",
        "=" * 50,
        f"y = {report.solution}",
        f"{marker} max residual {report.max_residual:.3e} (tolerance {report.tolerance:.1e}, {report.grid_points} points)",
        f"  mean residual {report.mean_residual:.3e}",
    ]
    for solution in special or []:
        residual = solution.residual
        ok = residual is not None and residual.passed
        label = ", ".join(solution.branch_notes) or "special solution"
        value = f"{residual.max_residual:.3e}" if residual is not None else "n/a"
        lines.append(f"{OK if ok else WARN} {label}: {solution.expression} (max residual {value})")
    for note in report.branch_notes:
        lines.append(f"  note: {note}")
    for failure in report.failures:
        lines.append(f"{FAIL} {failure}")
    return "\n".join(lines)


def series_payload(solution: CauchySolution, order: int) -> Dict[str, Any]:
    unknowns = solution.problem.unknowns
    coefficients = [
        [format_cdnum(solution.coefficient(j, k)) for k in range(order + 1)]
        for j in range(unknowns)
    ]
    payload = solution.report.model_dump()
    payload["coefficients"] = coefficients
    payload["notes"] = list(solution.notes)
    return payload


def render_series(solution: CauchySolution, order: int) -> str:
    report = solution.report
    marker = OK if report.passed else FAIL
    lines = [f"radius estimate {report.radius_estimate:.6g}"]
    if report.majorant_radius is not None:
        lines.append(f"majorant bound {report.majorant_radius:.6g}")
    for j in range(solution.problem.unknowns):
        lines.append(f"u{j}:")
        for k in range(order + 1):
            lines.append(f"  t^{k}: {format_cdnum(solution.coefficient(j, k))}")
    lines.append(f"{marker} max residual {report.max_residual:.3e} (tolerance {report.tolerance:.1e})")
    return "\n".join(lines)
