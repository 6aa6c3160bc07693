"""Explicit first-order classes: simplest, linear, separated, homogeneous, reduced"""

from __future__ import annotations

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..algebra import CdNum, cd_inv
from ..calculus import fixed_gauss
from ..config import Context, get_context
from ..errors import DegenerateDenominator, EvaluationFailure, NegativePowerOne, NotLeftReducible
from ..functions import cd_exp, cd_ln
from ..models import GridSpec
from ..phrase import Phrase, antiderivative_left, compose_phrase
from .characteristics import IVP_METHOD, Characteristic, solve_along, trace_characteristic
from .newton import Jacobian, invert, jacobian_of
from .problem import (
    CLOSED_FORM_TOL,
    NEWTON_TOL,
    QUADRATURE_TOL,
    BoundaryData,
    Fn,
    Ingredient,
    OdeKind,
    OdeProblem,
    Representation,
    Solution,
    as_function,
    check_points,
    constant_value,
    ingredient_level,
)
from .residual import attach_residual, real_power

logger = logging.getLogger(__name__)

Primitive = Callable[[CdNum], Tuple[Fn, Jacobian]]


def imaginary_phrase(level: int) -> Phrase:
    """Im z written as (z − z̃)/2."""
    z = Phrase.variable(level)
    return (z - Phrase.conj_variable(level)) * 0.5


def boundary_phrase(bd: BoundaryData, level: int) -> Optional[Phrase]:
    """η(Im z) as a phrase, or None when η is a plain callable."""
    if bd.eta is None:
        return Phrase.constant(0.0, level)
    if isinstance(bd.eta, Phrase):
        return compose_phrase(bd.eta, imaginary_phrase(max(level, bd.eta.level)))
    constant = constant_value(bd.eta, level)
    if constant is not None:
        return Phrase.constant(constant, level)
    return None


def real_constant(h: Ingredient, level: int, ctx: Context) -> Optional[float]:
    """Value of h when it is a nonzero real constant."""
    value = constant_value(h, level)
    if value is None or not value.is_real(ctx.tolerance) or abs(value.real) <= ctx.tolerance:
        return None
    return value.real


def _simplest_phrase(f: Phrase, c: float, bd: BoundaryData, level: int) -> Optional[Phrase]:
    try:
        G = antiderivative_left(f)
    except (NotLeftReducible, NegativePowerOne):
        return None
    eta = boundary_phrase(bd, level)
    if eta is None:
        return None
    level = max(level, G.level)
    foot = imaginary_phrase(level) + bd.alpha0
    return (G - compose_phrase(G, foot)) * (1.0 / c) + eta


def solve_simplest(
    f: Ingredient,
    h: Ingredient = 1.0,
    bd: Optional[BoundaryData] = None,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Solve [dy/dx].h = f(x) with y = η(Im x) on Re x = alpha0.

    Along the characteristic X(τ) through x the equation reads
    d/dτ y(X(τ)) = f(X(τ)), so y(x) = η(foot) + ∫ f(X(τ)) dτ. For a real
    constant h and a left-integrable phrase f this is the closed form
    [G(x) − G(alpha0 + Im x)]/h + η(Im x) with [DG].1 = f.

    Args:
        f: Right-hand side
        h: Direction field
        bd: Boundary data
        level: Algebra level
        grid: Residual grid
        ctx: Numerical context

    Returns:
        Verified Solution

    Raises:
        ZeroVectorField: h vanishes
        NonTransversalField: h is parallel to the boundary hyperplane
    """
    ctx = get_context(ctx)
    bd = bd or BoundaryData()
    level = ingredient_level(level, f, h, bd.eta)
    problem = OdeProblem(OdeKind.SIMPLEST, level, {"f": f, "h": h}, boundary=bd)

    c = real_constant(h, level, ctx)
    if c is not None and isinstance(f, Phrase):
        phrase = _simplest_phrase(f, c, bd, level)
        if phrase is not None:
            logger.debug("simplest equation in closed form: %s", phrase)
            return attach_residual(problem, Solution.from_phrase(problem.kind, phrase, CLOSED_FORM_TOL), grid, ctx)

    f_fn = problem.fn("f")

    def y(x: CdNum) -> CdNum:
        characteristic = trace_characteristic(h, x, bd.alpha0, ctx)
        return bd.eta_at(characteristic.foot) + characteristic.integrate(f_fn, ctx)

    solution = Solution(problem.kind, Representation.GRID_BACKED, y, QUADRATURE_TOL)
    return attach_residual(problem, solution, grid, ctx)


def linear_along(characteristic: Characteristic, b: Fn, Q: Fn, eta: CdNum, ctx: Context) -> CdNum:
    """y = e^{−B}(η + I) with B' = b(X), I' = e^{B} Q(X) integrated together."""
    if characteristic.span == 0.0:
        return eta
    level = max(eta.level, characteristic.target.level)
    dim = 1 << level

    def fun(tau: float, state: np.ndarray) -> np.ndarray:
        x = characteristic.point(tau)
        out = np.empty_like(state)
        out[0] = b(x).real
        out[1:] = math.exp(state[0]) * Q(x).promote(level).coeffs
        return out

    result = solve_ivp(
        fun,
        (0.0, characteristic.span),
        np.zeros(dim + 1),
        method=IVP_METHOD,
        rtol=ctx.ivp_rtol,
        atol=ctx.ivp_atol,
    )
    if not result.success:
        raise EvaluationFailure(f"linear integration along the characteristic failed: {result.message}")
    B, integral = result.y[0, -1], result.y[1:, -1]
    return (eta.promote(level) + CdNum(integral)) * math.exp(-B)


def solve_linear(
    b: Ingredient,
    Q: Ingredient = 0.0,
    h: Ingredient = 1.0,
    bd: Optional[BoundaryData] = None,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Solve [dy/dx].h + b(x)y = Q(x) for real b.

    Because b is real it commutes with everything, so along the
    characteristic y = exp(−B)·[η + ∫ exp(B)·Q] with B = ∫ b.

    Raises:
        NonRealCoefficient: b has an imaginary part at a check point
    """
    ctx = get_context(ctx)
    bd = bd or BoundaryData()
    level = ingredient_level(level, b, Q, h, bd.eta)
    problem = OdeProblem(OdeKind.LINEAR, level, {"b": b, "Q": Q, "h": h}, boundary=bd)
    problem.check_real(["b"], check_points(level, bd.alpha0), ctx)
    b_fn, Q_fn = problem.fn("b"), problem.fn("Q")

    b_const = constant_value(b, level)
    Q_const = constant_value(Q, level)
    homogeneous = Q_const is not None and abs(Q_const) == 0.0
    if b_const is not None and homogeneous:
        rate = b_const.real

        def y(x: CdNum) -> CdNum:
            characteristic = trace_characteristic(h, x, bd.alpha0, ctx)
            return bd.eta_at(characteristic.foot) * math.exp(-rate * characteristic.span)

        c = real_constant(h, level, ctx)
        expression = f"eta(Im z)*exp(-{rate!r}*(Re(z) - {bd.alpha0!r})/{c!r})" if c is not None else "grid-backed"
        solution = Solution(problem.kind, Representation.CLOSED_FORM, y, CLOSED_FORM_TOL, expression=expression)
    else:
        def y(x: CdNum) -> CdNum:
            characteristic = trace_characteristic(h, x, bd.alpha0, ctx)
            return linear_along(characteristic, b_fn, Q_fn, bd.eta_at(characteristic.foot), ctx)

        solution = Solution(problem.kind, Representation.GRID_BACKED, y, QUADRATURE_TOL)

    if homogeneous:
        note = _log_form_note(solution, h, b_fn, bd, level, ctx)
        if note:
            solution.branch_notes.append(note)
    return attach_residual(problem, solution, grid, ctx)


def _log_form_note(solution: Solution, h: Ingredient, b: Fn, bd: BoundaryData, level: int, ctx: Context) -> str:
    """Compare y with exp(Ln η − ∫b) at a check point."""
    x = check_points(level, bd.alpha0, count=1)[0]
    characteristic = trace_characteristic(h, x, bd.alpha0, ctx)
    eta = bd.eta_at(characteristic.foot)
    if abs(eta) <= ctx.tolerance:
        return ""
    B = characteristic.integrate(lambda t: CdNum.real_number(b(t).real, level), ctx)
    log_form = cd_exp(cd_ln(eta.promote(level), ctx) - B)
    gap = abs(log_form - solution(x))
    return f"log form exp(Ln eta - int b) agrees to {gap:.2e} at {x}"


def _primitive(f: Ingredient, level: int, ctx: Context) -> Tuple[Primitive, Optional[Phrase]]:
    """
    Antiderivative of the kernel f.

    Left-integrable phrases use their left-algorithm primitive g with its
    exact Jacobian. Anything else gets the segment primitive
    g(y) = ∫_0^1 f(a + t(y − a))·(y − a) dt anchored at the boundary value a,
    which is a primitive when f(y) commutes with y − a.
    """
    if isinstance(f, Phrase):
        try:
            G = antiderivative_left(f)
        except (NotLeftReducible, NegativePowerOne):
            logger.debug("kernel %s has no left primitive, using segment quadrature", f)
        else:
            jacobian = jacobian_of(G, ctx)
            return (lambda _anchor: (G, jacobian)), G

    fn = as_function(f, level)

    def build(anchor: CdNum) -> Tuple[Fn, Jacobian]:
        def g(y: CdNum) -> CdNum:
            delta = y - anchor
            return fixed_gauss(lambda t: fn(anchor + delta * t) * delta, 0.0, 1.0, pieces=2)

        return g, jacobian_of(g, ctx)

    return build, None


def power_kernel(f: Ingredient, exponent: float, level: int, ctx: Context) -> Ingredient:
    """y ↦ y^{−exponent}·f(y), kept a phrase when possible."""
    if isinstance(f, Phrase) and float(exponent).is_integer():
        return (Phrase.variable(level) ** (-int(exponent))) * f
    f_fn = as_function(f, level, 1.0)
    return lambda y: real_power(y, -exponent, ctx) * f_fn(y)


def separated_solution(
    kind: OdeKind,
    kernel: Ingredient,
    s: Ingredient,
    h: Ingredient,
    bd: BoundaryData,
    guess: Optional[CdNum],
    level: int,
    ctx: Context,
) -> Solution:
    primitive, G = _primitive(kernel, level, ctx)
    s_fn = as_function(s, level)

    def y(x: CdNum) -> CdNum:
        characteristic = trace_characteristic(h, x, bd.alpha0, ctx)
        start = bd.eta_at(characteristic.foot).promote(characteristic.target.level)
        g, jacobian = primitive(start)
        target = g(start) - characteristic.integrate(s_fn, ctx)
        return invert(g, target, start, guess, jacobian, ctx)

    note = f"primitive g = {G}" if G is not None else "primitive by segment quadrature from eta"
    return Solution(kind, Representation.GRID_BACKED, y, NEWTON_TOL, branch_notes=[note])


def solve_separated(
    f: Ingredient,
    s: Ingredient,
    h: Ingredient = 1.0,
    bd: Optional[BoundaryData] = None,
    guess: Optional[CdNum] = None,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Solve f̂(y).[dy/dx].h + s(x) = 0 for real h.

    With g the primitive of f, g(y(X(τ))) decreases by ∫ s along the
    characteristic, so y(x) solves g(y) = g(η(foot)) − ∫ s(X(τ)) dτ,
    found pointwise by damped Newton from ``guess`` (default η(foot)) with
    continuation from η(foot) as fallback.

    Raises:
        NonRealCoefficient: h is not real
        NewtonNonConvergent: inversion failed at a point
        SingularJacobian: g' singular along the way
    """
    ctx = get_context(ctx)
    bd = bd or BoundaryData()
    level = ingredient_level(level, f, s, h, bd.eta)
    problem = OdeProblem(OdeKind.SEPARATED, level, {"f": f, "s": s, "h": h}, boundary=bd)
    problem.check_real(["h"], check_points(level, bd.alpha0), ctx)
    solution = separated_solution(problem.kind, f, s, h, bd, guess, level, ctx)
    return attach_residual(problem, solution, grid, ctx)


def solve_power_separated(
    f: Ingredient,
    s: Ingredient,
    m: float,
    h: Ingredient = 1.0,
    bd: Optional[BoundaryData] = None,
    guess: Optional[CdNum] = None,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Solve f(y)[dy/dx].h + y^m s(x) = 0 as the separated equation with kernel y^{−m}f(y).

    The two forms agree where y^{−m} commutes with f(y)[dy/dx].h; the
    residual is taken in the original form.
    """
    ctx = get_context(ctx)
    bd = bd or BoundaryData()
    level = ingredient_level(level, f, s, h, bd.eta)
    problem = OdeProblem(
        OdeKind.POWER_SEPARATED, level, {"f": f, "s": s, "h": h}, scalars={"m": m}, boundary=bd
    )
    problem.check_real(["h"], check_points(level, bd.alpha0), ctx)
    solution = separated_solution(problem.kind, power_kernel(f, m, level, ctx), s, h, bd, guess, level, ctx)
    return attach_residual(problem, solution, grid, ctx)


def solve_homogeneous_ratio(
    f: Ingredient,
    h: Ingredient = 1.0,
    side: str = "right",
    bd: Optional[BoundaryData] = None,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Solve [dy/dx].h = f(y x⁻¹) (side "right", y = ux) or f(x⁻¹ y) (side "left", y = xu).

    Integrated along the characteristic as dy/dτ = f(u). The boundary
    hyperplane must avoid the origin, so alpha0 ≠ 0 in practice.

    Raises:
        DegenerateDenominator: the characteristic passes through x = 0
        ValueError: unknown side
    """
    if side not in ("right", "left"):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    ctx = get_context(ctx)
    bd = bd or BoundaryData()
    level = ingredient_level(level, f, h, bd.eta)
    problem = OdeProblem(
        OdeKind.HOMOGENEOUS, level, {"f": f, "h": h}, boundary=bd, options={"side": side}
    )
    f_fn = problem.fn("f")

    def rhs(x: CdNum, y: CdNum) -> CdNum:
        if abs(x) <= ctx.tolerance:
            raise DegenerateDenominator(f"x^-1 undefined at {x}")
        x_inv = cd_inv(x)
        return f_fn(x_inv * y if side == "left" else y * x_inv)

    def y(x: CdNum) -> CdNum:
        characteristic = trace_characteristic(h, x, bd.alpha0, ctx)
        return solve_along(characteristic, rhs, bd.eta_at(characteristic.foot), ctx)

    substitution = "u = x^-1 y" if side == "left" else "u = y x^-1"
    solution = Solution(problem.kind, Representation.GRID_BACKED, y, QUADRATURE_TOL, branch_notes=[substitution])
    return attach_residual(problem, solution, grid, ctx)


def solve_reduced(
    G: Callable[[CdNum, CdNum], CdNum],
    h: Ingredient = 1.0,
    bd: Optional[BoundaryData] = None,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """Solve the generic first-order problem [dv/dx].h = G(x, v) along characteristics."""
    ctx = get_context(ctx)
    bd = bd or BoundaryData()
    level = ingredient_level(level, h, bd.eta)
    problem = OdeProblem(OdeKind.REDUCED, level, {"G": G, "h": h}, boundary=bd)

    def y(x: CdNum) -> CdNum:
        characteristic = trace_characteristic(h, x, bd.alpha0, ctx)
        return solve_along(characteristic, G, bd.eta_at(characteristic.foot), ctx)

    solution = Solution(problem.kind, Representation.GRID_BACKED, y, QUADRATURE_TOL)
    return attach_residual(problem, solution, grid, ctx)
