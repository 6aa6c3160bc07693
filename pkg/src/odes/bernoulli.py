"""Bernoulli and generalized Bernoulli equations"""

from __future__ import annotations

import logging
from typing import Optional

from ..algebra import CdNum, cd_inv
from ..config import Context, get_context
from ..errors import BranchUndefined, InvalidParameter
from ..functions import cd_pow_real
from ..models import GridSpec
from .characteristics import solve_along, trace_characteristic
from .first_order import linear_along, power_kernel, separated_solution, solve_linear
from .problem import (
    QUADRATURE_TOL,
    BoundaryData,
    Ingredient,
    OdeKind,
    OdeProblem,
    Representation,
    Solution,
    check_points,
    constant_value,
    ingredient_level,
)
from .residual import attach_residual, real_power, solution_derivative

logger = logging.getLogger(__name__)

COMMUTATOR_TOL = 1e-6


def _rekind(solution: Solution, problem: OdeProblem, grid: Optional[GridSpec], ctx: Context) -> Solution:
    solution.kind = problem.kind
    return attach_residual(problem, solution, grid, ctx)


def check_commutation(
    solution: Solution,
    level: int,
    alpha0: float,
    h: Ingredient,
    ctx: Optional[Context] = None,
) -> list[str]:
    """
    Points where y and [dy/dx].h fail to commute.

    The reduction v = y^{1−m} is only valid where they commute; this is
    checked on the finished solution at a few check points.
    """
    ctx = get_context(ctx)
    derivative = solution_derivative(solution, ctx)
    problem = OdeProblem(OdeKind.BERNOULLI, level, {"h": h})
    h_fn = problem.fn("h", 1.0)
    failures = []
    for x in check_points(level, alpha0):
        y = solution(x)
        P = derivative(x, h_fn(x))
        gap = abs(y * P - P * y)
        if gap > COMMUTATOR_TOL * max(1.0, abs(y) * abs(P)):
            failures.append(f"{x}: y and (dy/dx).h do not commute (|[y, P]| = {gap:.3e})")
    return failures


def solve_bernoulli(
    p: Ingredient,
    s: Ingredient,
    m: float,
    h: Ingredient = 1.0,
    bd: Optional[BoundaryData] = None,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Solve [dy/dx].h + y·p(x) = y^m·s(x) for real p.

    v = y^{1−m} satisfies the linear equation
    [dv/dx].h + (1−m)p·v = (1−m)s with v = η^{1−m} on the boundary;
    then y = v^{1/(1−m)}. m = 0 is the linear equation itself.

    Args:
        p: Real coefficient
        s: Source
        m: Real exponent, m ≠ 1
        h: Direction field
        bd: Boundary data
        level: Algebra level
        grid: Residual grid
        ctx: Numerical context

    Returns:
        Verified Solution; non-commuting points are listed as failures

    Raises:
        InvalidParameter: m = 1
        NonRealCoefficient: p is not real
        BranchUndefined: v vanishes at a point
    """
    ctx = get_context(ctx)
    bd = bd or BoundaryData()
    level = ingredient_level(level, p, s, h, bd.eta)
    problem = OdeProblem(OdeKind.BERNOULLI, level, {"p": p, "s": s, "h": h}, scalars={"m": m}, boundary=bd)
    if m == 1.0:
        raise InvalidParameter("m = 1 makes the equation linear in y with coefficient p - s; use solve_linear")
    if m == 0.0:
        return _rekind(solve_linear(p, s, h, bd, level, grid, ctx), problem, grid, ctx)
    problem.check_real(["p"], check_points(level, bd.alpha0), ctx)

    p_fn, s_fn = problem.fn("p"), problem.fn("s")
    l = 1.0 - m

    def y(x: CdNum) -> CdNum:
        characteristic = trace_characteristic(h, x, bd.alpha0, ctx)
        eta = bd.eta_at(characteristic.foot)
        v = linear_along(
            characteristic,
            lambda t: p_fn(t) * l,
            lambda t: s_fn(t) * l,
            real_power(eta, l, ctx),
            ctx,
        )
        if abs(v) <= ctx.tolerance:
            raise BranchUndefined(f"v = y^{l:g} vanishes at {x}")
        return cd_pow_real(v, 1.0 / l, ctx)

    solution = Solution(problem.kind, Representation.GRID_BACKED, y, QUADRATURE_TOL, branch_notes=[f"v = y^{l:g}"])
    attach_residual(problem, solution, grid, ctx)
    failures = check_commutation(solution, level, bd.alpha0, h, ctx)
    if failures:
        logger.warning("bernoulli solution: %d commutation failures", len(failures))
        solution.branch_notes += failures
        solution.residual.failures += failures
    return solution


def solve_generalized_bernoulli(
    f: Optional[Ingredient],
    p: Ingredient,
    s: Ingredient,
    k: float,
    m: float,
    h: Ingredient = 1.0,
    bd: Optional[BoundaryData] = None,
    guess: Optional[CdNum] = None,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Solve f(y)[dy/dx].h + y^k p(x) = y^m s(x) for real p and h.

    - f = 1, k = 1: the Bernoulli equation.
    - s = 0: the separated equation y^{−k}f(y)[dy/dx].h + p = 0, inverted
      by Newton on its primitive.
    - otherwise dy/dτ = f(y)⁻¹(y^m s − y^k p) along the characteristic.

    Raises:
        InvalidParameter: k = m
        NonRealCoefficient: p or h is not real
    """
    ctx = get_context(ctx)
    bd = bd or BoundaryData()
    f = 1.0 if f is None else f
    level = ingredient_level(level, f, p, s, h, bd.eta)
    problem = OdeProblem(
        OdeKind.GENERALIZED_BERNOULLI,
        level,
        {"f": f, "p": p, "s": s, "h": h},
        scalars={"k": k, "m": m},
        boundary=bd,
    )
    if k == m:
        raise InvalidParameter(f"k and m must differ, both are {k:g}")
    problem.check_real(["p", "h"], check_points(level, bd.alpha0), ctx)

    f_const = constant_value(f, level)
    if k == 1.0 and f_const is not None and f_const.isclose(1.0, ctx.tolerance):
        return _rekind(solve_bernoulli(p, s, m, h, bd, level, grid, ctx), problem, grid, ctx)

    s_const = constant_value(s, level)
    if s_const is not None and abs(s_const) == 0.0:
        solution = separated_solution(problem.kind, power_kernel(f, k, level, ctx), p, h, bd, guess, level, ctx)
        return attach_residual(problem, solution, grid, ctx)

    f_fn, p_fn, s_fn = problem.fn("f", 1.0), problem.fn("p"), problem.fn("s")

    def rhs(x: CdNum, y: CdNum) -> CdNum:
        return cd_inv(f_fn(y)) * (real_power(y, m, ctx) * s_fn(x) - real_power(y, k, ctx) * p_fn(x))

    def y(x: CdNum) -> CdNum:
        characteristic = trace_characteristic(h, x, bd.alpha0, ctx)
        return solve_along(characteristic, rhs, bd.eta_at(characteristic.foot), ctx)

    solution = Solution(problem.kind, Representation.GRID_BACKED, y, QUADRATURE_TOL)
    return attach_residual(problem, solution, grid, ctx)
