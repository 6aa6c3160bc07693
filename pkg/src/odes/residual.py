"""Residual verification of solver output on seeded sample grids"""

from __future__ import annotations

import logging
from typing import Callable, List, Optional

import numpy as np
from scipy.stats import qmc

from ..algebra import CdNum, cd_inv
from ..calculus import directional_fd
from ..config import Context, get_context
from ..errors import NegativePowerOne, NotLeftReducible, OctodeError
from ..functions import cd_pow_real
from ..models import GridSpec, ResidualReport
from ..phrase import Phrase, antiderivative_left, total_derivative
from .problem import Fn, OdeKind, OdeProblem, ParametricPair, Solution, as_function, constant_value

logger = logging.getLogger(__name__)

Equation = Callable[[CdNum, CdNum, CdNum], CdNum]


def _halton(dim: int, count: int, seed: int) -> np.ndarray:
    sampler = qmc.Halton(d=dim, scramble=True, seed=seed)
    return sampler.random(count)


def sample_grid(level: int, alpha0: float = 0.0, grid: Optional[GridSpec] = None) -> list[CdNum]:
    """
    Seeded low-discrepancy points of the half-space Re x > alpha0.

    Real parts lie in [alpha0 + 0.05·radius, alpha0 + radius], imaginary
    parts in [-radius, radius]. With ``grid.plane`` set, only the real
    part and that imaginary component are nonzero.

    Args:
        level: Algebra level
        alpha0: Boundary hyperplane
        grid: Point count, seed, radius and plane

    Returns:
        List of sample points
    """
    grid = grid or GridSpec()
    dim = 1 << level
    active = [0, grid.plane] if grid.plane is not None else list(range(dim))
    unit = _halton(len(active), grid.points, grid.seed)
    points = []
    for row in unit:
        coeffs = np.zeros(dim)
        coeffs[0] = alpha0 + grid.radius * (0.05 + 0.95 * row[0])
        for slot, component in enumerate(active[1:], start=1):
            coeffs[component] = grid.radius * (2.0 * row[slot] - 1.0)
        points.append(CdNum(coeffs))
    return points


def parameter_grid(center: CdNum, radius: float, grid: Optional[GridSpec] = None) -> list[CdNum]:
    """Seeded points of the box of half-width ``radius`` around ``center``."""
    grid = grid or GridSpec()
    level = center.level
    dim = 1 << level
    active = [0, grid.plane] if grid.plane is not None else list(range(dim))
    unit = _halton(len(active), grid.points, grid.seed)
    points = []
    for row in unit:
        coeffs = center.coeffs.copy()
        for slot, component in enumerate(active):
            coeffs[component] += radius * (2.0 * row[slot] - 1.0)
        points.append(CdNum(coeffs))
    return points


def _residual_ctx(ctx: Context) -> Context:
    return ctx.model_copy(update={"fd_step": ctx.residual_step})


def solution_derivative(solution: Solution, ctx: Context) -> Callable[[CdNum, CdNum], CdNum]:
    """(x, h) ↦ [Dy(x)].h, exact for phrase solutions."""
    if solution.phrase is not None:
        operator = total_derivative(solution.phrase)
        return lambda x, h: operator.apply(x, h)
    fd_ctx = _residual_ctx(ctx)
    return lambda x, h: directional_fd(solution.y, x, h, fd_ctx, stencil=5)


def hat_operator_of(f, level: int) -> Callable[[CdNum, CdNum], CdNum]:
    """(y, k) ↦ f̂(y).k; falls back to f(y)·k when f has no left-algorithm primitive."""
    if isinstance(f, Phrase):
        try:
            operator = total_derivative(antiderivative_left(f))
            return lambda y, k: operator.apply(y, k)
        except (NotLeftReducible, NegativePowerOne):
            pass
    fn = as_function(f, level)
    return lambda y, k: fn(y) * k


def real_power(y: CdNum, exponent: float, ctx: Context) -> CdNum:
    if exponent == 1.0:
        return y
    if exponent == 0.0:
        return CdNum.one(y.level)
    return cd_pow_real(y, exponent, ctx)


def equation_residual(problem: OdeProblem, ctx: Optional[Context] = None) -> Equation:
    """
    LHS − RHS of a first-order equation as a function of (x, y, P), P = [Dy(x)].h.

    Raises:
        ValueError: the kind has no first-order form (n-th order problems)
    """
    ctx = get_context(ctx)
    kind = problem.kind
    level = problem.level
    f, s = problem.fn("f"), problem.fn("s")
    m, k = problem.scalar("m"), problem.scalar("k", 1.0)

    if kind is OdeKind.SIMPLEST:
        return lambda x, y, P: P - f(x)
    if kind is OdeKind.LINEAR:
        b, Q = problem.fn("b"), problem.fn("Q")
        return lambda x, y, P: P + b(x) * y - Q(x)
    if kind is OdeKind.SEPARATED:
        hat = hat_operator_of(problem.ingredients.get("f", 0.0), level)
        return lambda x, y, P: hat(y, P) + s(x)
    if kind is OdeKind.POWER_SEPARATED:
        return lambda x, y, P: f(y) * P + real_power(y, m, ctx) * s(x)
    if kind is OdeKind.HOMOGENEOUS:
        left = problem.options.get("side", "right") == "left"
        return lambda x, y, P: P - f(cd_inv(x) * y if left else y * cd_inv(x))
    if kind is OdeKind.BERNOULLI:
        p = problem.fn("p")
        return lambda x, y, P: P + y * p(x) - real_power(y, m, ctx) * s(x)
    if kind is OdeKind.GENERALIZED_BERNOULLI:
        p = problem.fn("p")
        f1 = problem.fn("f", 1.0)
        return lambda x, y, P: f1(y) * P + real_power(y, k, ctx) * p(x) - real_power(y, m, ctx) * s(x)
    if kind is OdeKind.QUADRATIC:
        b, c = problem.fn("b"), problem.fn("c")

        def quadratic(x: CdNum, y: CdNum, P: CdNum) -> CdNum:
            u = cd_inv(x) * y
            bu = b(u)
            return P * P + bu * P + P * bu + c(u)

        return quadratic
    if kind is OdeKind.CLAIRAUT:
        eta = problem.fn("eta")
        return lambda x, y, P: y - (x * P + eta(P))
    if kind is OdeKind.LAGRANGE:
        eta = problem.fn("eta")
        fl, sl = problem.fn("f"), problem.fn("s")
        return lambda x, y, P: y - (x * fl(P) + sl(P) * x + eta(P))
    if kind is OdeKind.REDUCED:
        G = problem.ingredients["G"]
        return lambda x, y, P: P - G(x, y)
    raise ValueError(f"{kind.value} has no first-order residual")


def residual_report(points: List[CdNum], evaluate: Callable[[CdNum], float], tolerance: float) -> ResidualReport:
    used, values, failures = [], [], []
    for point in points:
        try:
            value = evaluate(point)
        except (OctodeError, ArithmeticError, ValueError) as e:
            failures.append(f"{point}: {e}")
            continue
        if not np.isfinite(value):
            failures.append(f"{point}: non-finite residual")
            continue
        used.append(point.coeffs.tolist())
        values.append(float(value))
    if failures:
        logger.warning("residual evaluation failed at %d of %d points", len(failures), len(points))
    return ResidualReport.from_values(used, values, tolerance, failures)


def verify_residual(
    problem: OdeProblem,
    solution: Solution,
    grid: Optional[List[CdNum]] = None,
    ctx: Optional[Context] = None,
) -> ResidualReport:
    """
    Evaluate the original equation on the solution at every grid point.

    Args:
        problem: The equation
        solution: Explicit solution y(x)
        grid: Sample points; defaults to 50 seeded points near the boundary
        ctx: Numerical context

    Returns:
        ResidualReport; points where evaluation fails are listed, not raised
    """
    ctx = get_context(ctx)
    if grid is None:
        grid = sample_grid(problem.level, problem.boundary.alpha0)
    if problem.kind is OdeKind.NTH_ORDER:
        return _verify_iterated(problem, solution, grid, ctx)
    equation = equation_residual(problem, ctx)
    derivative = solution_derivative(solution, ctx)
    h = problem.fn("h", 1.0)

    def at(x: CdNum) -> float:
        y = solution(x)
        P = derivative(x, h(x))
        return abs(equation(x, y, P))

    report = residual_report(grid, at, solution.tolerance)
    logger.debug("%s residual: max %.3e mean %.3e", problem.kind.value, report.max_residual, report.mean_residual)
    return report


def iterated_derivative(fn: Fn, h: Fn, order: int, ctx: Context) -> Fn:
    """x ↦ (...(y^(n).h)...).h by nested central differences."""
    if order == 0:
        return fn
    step = ctx.residual_step ** (2.0 / (order + 1))
    nested_ctx = ctx.model_copy(update={"fd_step": step})
    inner = iterated_derivative(fn, h, order - 1, ctx)
    return lambda x: directional_fd(inner, x, h(x), nested_ctx, stencil=5)


def _verify_iterated(problem: OdeProblem, solution: Solution, grid: List[CdNum], ctx: Context) -> ResidualReport:
    n = int(problem.scalar("n", 1))
    g, h = problem.fn("g"), problem.fn("h", 1.0)
    if solution.phrase is not None and constant_value(problem.ingredients.get("h", 1.0), problem.level) is not None:
        operator = solution.phrase
        for _ in range(n):
            operator = total_derivative(operator)

        def at(x: CdNum) -> float:
            value = operator(x, *([h(x)] * n))
            return abs(value - g(x))
    else:
        derivative = iterated_derivative(solution.y, h, n, ctx)

        def at(x: CdNum) -> float:
            return abs(derivative(x) - g(x))

    return residual_report(grid, at, solution.tolerance)


def verify_parametric(
    problem: OdeProblem,
    pair: ParametricPair,
    parameters: List[CdNum],
    tolerance: float,
    ctx: Optional[Context] = None,
) -> ResidualReport:
    """
    Residual of an implicit first-order relation along a parametric curve.

    The slope is taken along the real direction of the parameter,
    (dy/dp)(dx/dp)⁻¹, which is the derivative along 1 when x, y and p
    commute; P is that slope times the constant field h.
    """
    ctx = get_context(ctx)
    equation = equation_residual(problem, ctx)
    fd_ctx = _residual_ctx(ctx)
    h = problem.fn("h", 1.0)

    def at(p: CdNum) -> float:
        x, y = pair(p)
        one = CdNum.one(p.level)
        dx = directional_fd(pair.x, p, one, fd_ctx, stencil=5)
        dy = directional_fd(pair.y, p, one, fd_ctx, stencil=5)
        P = dy * cd_inv(dx) * h(x)
        return abs(equation(x, y, P))

    return residual_report(parameters, at, tolerance)


def verify_flow_parametric(
    problem: OdeProblem,
    t_of: Fn,
    pair: ParametricPair,
    parameters: List[CdNum],
    h: Fn,
    tolerance: float,
    ctx: Optional[Context] = None,
) -> ResidualReport:
    """
    Residual of an equation read in the flow variable t of x = ω_h(t).

    Along p ↦ (t(p), x(p), y(p)) the relation is checked in t with
    P = (dy/dp)(dt/dp)⁻¹, and the flow defect |(dx/dp)(dt/dp)⁻¹ − h(x)|
    is added, so a wrong ω shows up in the residual.
    """
    ctx = get_context(ctx)
    equation = equation_residual(problem, ctx)
    fd_ctx = _residual_ctx(ctx)

    def at(p: CdNum) -> float:
        one = CdNum.one(p.level)
        t = t_of(p)
        x, y = pair(p)
        inv_dt = cd_inv(directional_fd(t_of, p, one, fd_ctx, stencil=5))
        P = directional_fd(pair.y, p, one, fd_ctx, stencil=5) * inv_dt
        drift = directional_fd(pair.x, p, one, fd_ctx, stencil=5) * inv_dt - h(x)
        return abs(equation(t, y, P)) + abs(drift)

    return residual_report(parameters, at, tolerance)


def attach_residual(
    problem: OdeProblem,
    solution: Solution,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """Verify ``solution`` on the seeded grid of ``problem`` and store the report on it."""
    points = sample_grid(problem.level, problem.boundary.alpha0, grid)
    solution.residual = verify_residual(problem, solution, points, ctx)
    if not solution.residual.passed:
        logger.warning(
            "%s solution unverified: max residual %.3e, tolerance %.1e",
            problem.kind.value,
            solution.residual.max_residual,
            solution.tolerance,
        )
    return solution
