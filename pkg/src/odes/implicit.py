"""Equations not solved for the derivative: quadratic, Clairaut, Lagrange"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.integrate import solve_ivp

from ..algebra import CdNum, cd_inv
from ..calculus import directional_fd
from ..config import Context, get_context
from ..errors import (
    AnsatzViolation,
    BranchUndefined,
    EvaluationFailure,
    InvalidParameter,
    NonInvertibleOperator,
    NotLeftReducible,
)
from ..functions import RootKind, RootSet, cd_pow_real, sqrt_set
from ..models import GridSpec
from ..phrase import Phrase, compose_phrase, left_decompose, total_derivative
from .characteristics import IVP_METHOD
from .first_order import imaginary_phrase, solve_homogeneous_ratio
from .problem import (
    CLOSED_FORM_TOL,
    QUADRATURE_TOL,
    BoundaryData,
    Fn,
    Ingredient,
    OdeKind,
    OdeProblem,
    ParametricPair,
    Representation,
    Solution,
    as_function,
    constant_value,
    ingredient_level,
)
from .omega import solve_omega
from .residual import attach_residual, parameter_grid, verify_flow_parametric, verify_parametric

logger = logging.getLogger(__name__)


@dataclass
class ImplicitResult:
    """General solution plus the singular and particular solutions found beside it."""

    general: Solution
    special: List[Solution] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.general.verified and all(s.verified for s in self.special)


def quadratic_derivative_roots(b: CdNum, c: CdNum, ctx: Optional[Context] = None) -> RootSet:
    """
    All λ with λ² + bλ + λb + c = 0.

    Since (λ + b)² = λ² + bλ + λb + b², λ = −b + w for every square root w
    of b² − c; a negative real b² − c gives a whole sphere of roots.
    """
    level = max(b.level, c.level)
    b, c = b.promote(level), c.promote(level)
    return sqrt_set(b * b - c, ctx).shifted(-b)


def solve_quadratic_in_derivative(
    b: Ingredient,
    c: Ingredient,
    h: Ingredient = 1.0,
    root: int = 0,
    bd: Optional[BoundaryData] = None,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Solve P² + b(u)P + P b(u) + c(u) = 0, P = [dy/dx].h, u = x⁻¹y.

    Picking the root ``root`` (0 or 1) of the quadratic at every u turns the
    relation into the left homogeneous equation [dy/dx].h = λ(u).

    Raises:
        BranchUndefined: b² − c is negative real somewhere along the way
    """
    if root not in (0, 1):
        raise InvalidParameter(f"root index must be 0 or 1, got {root}")
    ctx = get_context(ctx)
    bd = bd or BoundaryData()
    level = ingredient_level(level, b, c, h, bd.eta)
    problem = OdeProblem(
        OdeKind.QUADRATIC, level, {"b": b, "c": c, "h": h}, boundary=bd, options={"root": str(root)}
    )
    b_fn, c_fn = problem.fn("b"), problem.fn("c")

    def branch(u: CdNum) -> CdNum:
        roots = quadratic_derivative_roots(b_fn(u), c_fn(u), ctx)
        if roots.kind is RootKind.SPHERE:
            raise BranchUndefined(f"b^2 - c is negative real at u = {u}; the roots form a sphere")
        return roots.points[min(root, len(roots.points) - 1)]

    inner = solve_homogeneous_ratio(branch, h, "left", bd, level, grid, ctx)
    solution = Solution(
        problem.kind,
        inner.representation,
        inner.y,
        inner.tolerance,
        branch_notes=inner.branch_notes + [f"root {root} of (P + b)^2 = b^2 - c"],
    )
    return attach_residual(problem, solution, grid, ctx)


def derivative_along_one(obj: Ingredient, level: int, ctx: Context) -> Fn:
    """p ↦ [Dφ(p)].1, exact for phrases."""
    if isinstance(obj, Phrase):
        operator = total_derivative(obj)
        return lambda p: operator.apply(p.promote(max(p.level, obj.level)), CdNum.one(max(p.level, obj.level)))
    fn = as_function(obj, level)
    return lambda p: directional_fd(fn, p, CdNum.one(p.level), ctx, stencil=5)


def _real_square_coefficient(eta: Ingredient) -> Optional[float]:
    """a when η(p) = a·p² with real a."""
    if not isinstance(eta, Phrase):
        return None
    try:
        shapes = left_decompose(eta)
    except NotLeftReducible:
        return None
    if len(shapes) != 1:
        return None
    shape = shapes[0]
    if shape.n != 2 or shape.a is not None or shape.b is not None or not shape.has_var:
        return None
    return shape.coeff


def solve_clairaut(
    eta: Ingredient,
    phi: Ingredient = 1.0,
    h: Ingredient = 1.0,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    center: float = 1.0,
    spread: float = 0.5,
    ctx: Optional[Context] = None,
) -> ImplicitResult:
    """
    Solve y = x·P + η(P), P = [dy/dx].1.

    The general family is y = x·φ(Im x) + η(φ(Im x)). The singular solution
    is the curve x = −[Dη(p)].1, y = −([Dη(p)].1)p + η(p); for η = a·p² it
    is recognized as y = −x²/(4a).

    For h ≠ 1 the equation is read in the flow variable t of x = ω_h(t),
    ω_h(center) = center: y = t·P + η(P) with P = [dy/dt].1 = [dy/dx].h.
    Both the family and the singular curve come back as parametric
    solutions t ↦ (ω_h(t), y).

    Args:
        eta: η(p)
        phi: φ of the imaginary part; constants give straight lines
        h: Direction field; anything but 1 goes through ω_h
        level: Algebra level
        grid: Residual grid, also used for the parameter samples
        center: Real center of the parameter box, also the marked point of ω_h
        spread: Half-width of the parameter box
        ctx: Numerical context

    Raises:
        ZeroVectorField: h vanishes at center
        NonAnalyticInput: h ≠ 1 is neither constant nor a phrase
    """
    ctx = get_context(ctx)
    level = ingredient_level(level, eta, phi, h)
    h_value = constant_value(h, level)
    if h_value is None or not h_value.isclose(1.0, ctx.tolerance):
        return _clairaut_in_flow_variable(eta, phi, h, level, grid, center, spread, ctx)
    problem = OdeProblem(OdeKind.CLAIRAUT, level, {"eta": eta, "h": 1.0})
    eta_fn = problem.fn("eta")
    phi_fn = as_function(phi, level)

    general = _clairaut_general(eta, phi, level)
    if general is None:
        def y(x: CdNum) -> CdNum:
            slope = phi_fn(x.imag)
            return x * slope + eta_fn(slope)

        general = Solution(
            problem.kind, Representation.CLOSED_FORM, y, CLOSED_FORM_TOL, expression="z*phi(Im z) + eta(phi(Im z))"
        )
    attach_residual(problem, general, grid, ctx)

    result = ImplicitResult(general)
    if constant_value(eta, level) is not None:
        general.branch_notes.append("eta is constant: the singular solution degenerates to a point")
        return result

    d_eta = derivative_along_one(eta, level, ctx)
    pair = ParametricPair(
        lambda p: -d_eta(p),
        lambda p: -(d_eta(p) * p) + eta_fn(p),
        label="x = -(d eta/dp).1, y = -((d eta/dp).1)p + eta(p)",
    )
    singular = Solution(
        problem.kind, Representation.PARAMETRIC, None, CLOSED_FORM_TOL, expression=pair.label, parametric=pair
    )
    parameters = parameter_grid(CdNum.real_number(center, level), spread, grid)
    singular.residual = verify_parametric(problem, pair, parameters, singular.tolerance, ctx)
    result.special.append(singular)

    a = _real_square_coefficient(eta)
    if a is not None and a != 0.0:
        phrase = (Phrase.variable(level) ** 2) * (-1.0 / (4.0 * a))
        envelope = Solution.from_phrase(problem.kind, phrase, CLOSED_FORM_TOL, notes=["singular solution"])
        result.special.append(attach_residual(problem, envelope, grid, ctx))
    return result


def _clairaut_in_flow_variable(
    eta: Ingredient,
    phi: Ingredient,
    h: Ingredient,
    level: int,
    grid: Optional[GridSpec],
    center: float,
    spread: float,
    ctx: Context,
) -> ImplicitResult:
    alpha = CdNum.real_number(center, level)
    omega = solve_omega(h, alpha, evaluation_range=spread, ctx=ctx)
    problem = OdeProblem(OdeKind.CLAIRAUT, level, {"eta": eta, "h": 1.0})
    eta_fn = problem.fn("eta")
    phi_fn = as_function(phi, level)
    h_fn = as_function(h, level)
    parameters = parameter_grid(alpha, spread, grid)

    def family_y(t: CdNum) -> CdNum:
        slope = phi_fn(t.imag)
        return t * slope + eta_fn(slope)

    family = ParametricPair(omega, family_y, label=f"x = {omega.name} at t, y = t*phi(Im t) + eta(phi(Im t))")
    general = Solution(
        problem.kind,
        Representation.PARAMETRIC,
        None,
        QUADRATURE_TOL,
        expression=family.label,
        parametric=family,
        branch_notes=["general family in the flow variable t, x = omega_h(t)"],
    )
    general.residual = verify_flow_parametric(problem, lambda t: t, family, parameters, h_fn, general.tolerance, ctx)
    result = ImplicitResult(general)
    if constant_value(eta, level) is not None:
        general.branch_notes.append("eta is constant: the singular solution degenerates to a point")
        return result

    d_eta = derivative_along_one(eta, level, ctx)

    def t_of(p: CdNum) -> CdNum:
        return -d_eta(p)

    envelope = ParametricPair(
        lambda p: omega(t_of(p)),
        lambda p: -(d_eta(p) * p) + eta_fn(p),
        label=f"x = {omega.name} at t = -(d eta/dp).1, y = -((d eta/dp).1)p + eta(p)",
    )
    singular = Solution(
        problem.kind,
        Representation.PARAMETRIC,
        None,
        QUADRATURE_TOL,
        expression=envelope.label,
        parametric=envelope,
        branch_notes=["singular solution in the flow variable"],
    )
    singular.residual = verify_flow_parametric(problem, t_of, envelope, parameters, h_fn, singular.tolerance, ctx)
    result.special.append(singular)
    return result


def _clairaut_general(eta: Ingredient, phi: Ingredient, level: int) -> Optional[Solution]:
    if isinstance(phi, Phrase):
        slope = compose_phrase(phi, imaginary_phrase(max(level, phi.level)))
    else:
        value = constant_value(phi, level)
        if value is None:
            return None
        slope = Phrase.constant(value, level)
    if isinstance(eta, Phrase):
        offset = compose_phrase(eta, slope)
    else:
        value = constant_value(eta, level)
        if value is None:
            return None
        offset = Phrase.constant(value, level)
    phrase = Phrase.variable(level) * slope + offset
    return Solution.from_phrase(OdeKind.CLAIRAUT, phrase, CLOSED_FORM_TOL, notes=["general family"])


def _is_zero(obj: Optional[Ingredient], level: int) -> bool:
    if obj is None:
        return True
    value = constant_value(obj, level)
    return value is not None and abs(value) == 0.0


def _polynomial(F: Ingredient) -> Optional[List[float]]:
    """Real coefficients of F, highest degree first, when F is a real polynomial phrase."""
    if not isinstance(F, Phrase):
        return None
    try:
        shapes = left_decompose(F)
    except NotLeftReducible:
        return None
    coeffs: dict[int, float] = {}
    for shape in shapes:
        if shape.a is not None and not shape.a.is_real(1e-14):
            return None
        if shape.b is not None or shape.n < 0:
            return None
        scale = shape.coeff * (shape.a.real if shape.a is not None else 1.0)
        degree = shape.n if shape.has_var else 0
        coeffs[degree] = coeffs.get(degree, 0.0) + scale
    top = max(coeffs, default=0)
    return [coeffs.get(d, 0.0) for d in range(top, -1, -1)]


def stationary_slopes(F: Ingredient, h: float) -> List[float]:
    """Real roots p* of p = h·F(p) for a real polynomial F."""
    coeffs = _polynomial(F)
    if coeffs is None:
        return []
    poly = np.trim_zeros(np.polysub([1.0, 0.0], np.multiply(h, coeffs)), "f")
    if len(poly) <= 1:
        return []
    roots = np.roots(poly)
    return sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-9)


def _recognize_square_root_family(F: Ingredient, eta: Ingredient, h: float, p0: float, x0: float) -> Optional[float]:
    """C of y = [(x + 1)^{1/2} + C]² when F(p) = η(p) = p² and h = 1."""
    if h != 1.0 or _real_square_coefficient(F) != 1.0 or _real_square_coefficient(eta) != 1.0:
        return None
    if x0 + 1.0 <= 0.0:
        return None
    return (p0 - 1.0) * math.sqrt(x0 + 1.0)


def solve_lagrange(
    f: Optional[Ingredient] = None,
    s: Optional[Ingredient] = None,
    eta: Optional[Ingredient] = None,
    h: Ingredient = 1.0,
    commuting_ansatz: bool = True,
    p0: float = 2.0,
    x0: float = 0.0,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    spread: float = 0.5,
    ctx: Optional[Context] = None,
) -> ImplicitResult:
    """
    Solve y = x·f(P) + s(P)·x + η(P), P = [dy/dx].h, for real constant h.

    With p, x and dp/dx commuting, differentiation along 1 gives the linear
    equation dx/dp = h(x·F'(p) + η'(p))·(p − h·F(p))⁻¹ in x(p), where F is
    whichever of f, s is present. It is integrated from x(p0) = x0 along
    straight segments in the parameter; y(p) = x·F(p) + η(p).

    Stationary slopes p* = h·F(p*) give the particular and singular
    solutions y = x·F(p*) + η(p*), found for real polynomial F.

    Args:
        f: Right factor of x, or None
        s: Left factor of x, or None
        eta: η(p)
        h: Real constant direction
        commuting_ansatz: Must be True
        p0: Real starting parameter
        x0: x at p0
        level: Algebra level
        grid: Residual grid; its plane (default e1) holds the parameter samples
        spread: Half-width of the parameter box around p0
        ctx: Numerical context

    Raises:
        AnsatzViolation: commuting_ansatz is False or h is not a real constant
        InvalidParameter: not exactly one of f, s is given
        NonInvertibleOperator: p − h·F(p) vanishes at a parameter
    """
    ctx = get_context(ctx)
    if not commuting_ansatz:
        raise AnsatzViolation("Lagrange equations are solved under the commuting ansatz only")
    level = ingredient_level(level, f, s, eta, h)
    h_value = constant_value(h, level)
    if h_value is None or not h_value.is_real(ctx.tolerance) or abs(h_value.real) <= ctx.tolerance:
        raise AnsatzViolation("the commuting ansatz needs a real constant h")
    c = h_value.real
    if _is_zero(f, level) == _is_zero(s, level):
        raise InvalidParameter("exactly one of f and s must be nonzero")
    on_right = not _is_zero(f, level)
    F = f if on_right else s
    eta = 0.0 if eta is None else eta
    problem = OdeProblem(
        OdeKind.LAGRANGE,
        level,
        {"f": f if on_right else None, "s": None if on_right else s, "eta": eta, "h": c},
    )
    F_fn, eta_fn = as_function(F, level), as_function(eta, level)
    dF, d_eta = derivative_along_one(F, level, ctx), derivative_along_one(eta, level, ctx)

    def slope(p: CdNum, x: CdNum) -> CdNum:
        bracket = p - F_fn(p) * c
        if abs(bracket) <= ctx.tolerance * max(1.0, abs(p)):
            raise NonInvertibleOperator(f"p - h F(p) vanishes at p = {p}")
        return (x * dF(p) + d_eta(p)) * c * cd_inv(bracket)

    start = CdNum.real_number(p0, level)

    def x_of(p: CdNum) -> CdNum:
        p = p.promote(level)
        direction = p - start
        if abs(direction) == 0.0:
            return CdNum.real_number(x0, level)
        result = solve_ivp(
            lambda t, coords: (slope(start + direction * t, CdNum(coords)) * direction).coeffs,
            (0.0, 1.0),
            CdNum.real_number(x0, level).coeffs.copy(),
            method=IVP_METHOD,
            rtol=ctx.ivp_rtol,
            atol=ctx.ivp_atol,
        )
        if not result.success:
            raise EvaluationFailure(f"x(p) integration to {p} failed: {result.message}")
        return CdNum(result.y[:, -1])

    def y_of(p: CdNum) -> CdNum:
        x = x_of(p)
        factor = F_fn(p)
        return (x * factor if on_right else factor * x) + eta_fn(p)

    pair = ParametricPair(x_of, y_of, label=f"x(p) from x({p0:g}) = {x0:g}, y = x F(p) + eta(p)")
    general = Solution(
        problem.kind, Representation.PARAMETRIC, None, QUADRATURE_TOL, expression=pair.label, parametric=pair
    )
    samples = (grid or GridSpec()).model_copy(update={"plane": (grid.plane if grid and grid.plane else 1)})
    parameters = parameter_grid(start, spread, samples)
    general.residual = verify_parametric(problem, pair, parameters, general.tolerance, ctx)
    result = ImplicitResult(general)

    constant = _recognize_square_root_family(F, eta, c, p0, x0)
    if constant is not None:
        def y(x: CdNum) -> CdNum:
            root = cd_pow_real(x + 1.0, 0.5, ctx) + constant
            return root * root

        family = Solution(
            problem.kind, Representation.CLOSED_FORM, y, CLOSED_FORM_TOL, expression=f"((z + 1)^(1/2) + {constant!r})^2"
        )
        general.branch_notes.append(f"p eliminated: y = {family.expression}")
        result.special.append(attach_residual(problem, family, grid, ctx))

    for p_star in stationary_slopes(F, c):
        point = CdNum.real_number(p_star, level)
        value = Phrase.constant(F_fn(point), level)
        z = Phrase.variable(level)
        phrase = (z * value if on_right else value * z) + Phrase.constant(eta_fn(point), level)
        kind = "singular" if abs(p_star) <= ctx.tolerance else "particular"
        note = f"{kind} solution at p* = {p_star:g}"
        stationary = Solution.from_phrase(problem.kind, phrase, CLOSED_FORM_TOL, notes=[note])
        result.special.append(attach_residual(problem, stationary, grid, ctx))
    logger.debug("lagrange: %d special solutions", len(result.special))
    return result
