"""Order reduction of higher-order equations and back-substitution of their solutions"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence

from ..algebra import CdNum, cd_inv
from ..calculus import fixed_gauss
from ..config import Context, get_context
from ..errors import BranchUndefined, ShapeMismatch
from ..functions import RootKind, cd_exp, sqrt_set
from ..models import GridSpec, ResidualReport
from .characteristics import solve_along, trace_characteristic
from .first_order import real_constant, solve_reduced
from .higher_order import iterated_value
from .problem import (
    QUADRATURE_TOL,
    BoundaryData,
    Fn,
    Ingredient,
    OdeKind,
    Representation,
    Solution,
    as_function,
    constant_value,
)
from .residual import iterated_derivative, residual_report, sample_grid

logger = logging.getLogger(__name__)

Rhs = Callable[[CdNum, Sequence[CdNum]], CdNum]

STRATEGIES = ("missing_y", "autonomous", "top_two", "energy", "product")


@dataclass
class HigherOrderProblem:
    """
    y^(n) = rhs(x, [y, y', ..., y^(n−1)]), every derivative iterated along h.

    ``uses`` lists the derivative orders rhs reads and ``depends_on_x``
    whether it reads x; the strategies check their shape against these.
    ``ingredients`` carries named parts some strategies need (g for the
    energy method, f and g for the product substitution).
    """

    order: int
    rhs: Rhs
    h: Ingredient = 1.0
    etas: List[Ingredient] = field(default_factory=list)
    alpha0: float = 0.0
    level: int = 2
    uses: FrozenSet[int] = frozenset()
    depends_on_x: bool = True
    ingredients: Dict[str, Ingredient] = field(default_factory=dict)

    def __post_init__(self):
        if self.order < 1:
            raise ShapeMismatch(f"order must be at least 1, got {self.order}")
        self.etas = list(self.etas) + [0.0] * max(0, self.order - len(self.etas))
        if not self.uses:
            self.uses = frozenset(range(self.order))

    def eta(self, k: int) -> Fn:
        return as_function(self.etas[k], self.level)

    def constant_eta(self, k: int) -> CdNum:
        value = constant_value(self.etas[k], self.level)
        if value is None:
            raise ShapeMismatch(f"this strategy needs a constant eta_{k}")
        return value


@dataclass
class Reduction:
    """A lower-order problem and the recipe that rebuilds y from its solution."""

    strategy: str
    problem: HigherOrderProblem
    reduced: HigherOrderProblem
    recover: Callable[[Solution], Fn]
    first_integral: Optional[Fn] = None
    factors: Dict[str, Fn] = field(default_factory=dict)


def _zeros(level: int, count: int) -> List[CdNum]:
    return [CdNum.zero(level)] * count


def _missing_y(problem: HigherOrderProblem, ctx: Context) -> Reduction:
    """v = y'.h lowers the order by one when rhs ignores y."""
    if problem.order < 2 or 0 in problem.uses:
        raise ShapeMismatch("missing_y needs order ≥ 2 and a right side free of y")
    level = problem.level
    reduced = HigherOrderProblem(
        problem.order - 1,
        lambda x, ds: problem.rhs(x, _zeros(level, 1) + list(ds)),
        problem.h,
        problem.etas[1:],
        problem.alpha0,
        level,
        frozenset(k - 1 for k in problem.uses),
        problem.depends_on_x,
    )
    eta0 = problem.eta(0)

    def recover(sub: Solution) -> Fn:
        def y(x: CdNum) -> CdNum:
            characteristic = trace_characteristic(problem.h, x, problem.alpha0, ctx)
            return eta0(characteristic.foot.imag) + characteristic.integrate(sub.y, ctx)

        return y

    return Reduction("missing_y", problem, reduced, recover)


def _top_two(problem: HigherOrderProblem, ctx: Context) -> Reduction:
    """u = y^(n−1) solves a first-order equation when rhs reads only y^(n−1)."""
    n = problem.order
    if n < 2 or not problem.uses <= {n - 1}:
        raise ShapeMismatch("top_two needs order ≥ 2 and a right side in x and y^(n-1) only")
    level = problem.level
    reduced = HigherOrderProblem(
        1,
        lambda x, ds: problem.rhs(x, _zeros(level, n - 1) + [ds[0]]),
        problem.h,
        [problem.etas[n - 1]],
        problem.alpha0,
        level,
        frozenset({0}),
        problem.depends_on_x,
    )
    etas = [problem.eta(k) for k in range(n - 1)]

    def recover(sub: Solution) -> Fn:
        def y(x: CdNum) -> CdNum:
            characteristic = trace_characteristic(problem.h, x, problem.alpha0, ctx)
            return iterated_value(characteristic, sub.y, etas, n - 1, ctx)

        return y

    return Reduction("top_two", problem, reduced, recover)


def _autonomous(problem: HigherOrderProblem, ctx: Context) -> Reduction:
    """
    p(y) = y'.h for y'' = F(y, y') without x.

    Under the commuting ansatz [dp/dy].p = F(y, p), i.e. [dp/dy].1 = F(y, p)·p⁻¹,
    a first-order problem in the variable y with p = η_1 on Re y = Re η_0.
    """
    if problem.order != 2 or problem.depends_on_x:
        raise ShapeMismatch("autonomous needs a second-order right side free of x")
    eta0, eta1 = problem.constant_eta(0), problem.constant_eta(1)
    if abs(eta1) <= ctx.tolerance:
        raise ShapeMismatch("autonomous reduction needs a nonzero initial slope")

    def rhs(y: CdNum, ds: Sequence[CdNum]) -> CdNum:
        p = ds[0]
        return problem.rhs(y, [y, p]) * cd_inv(p)

    reduced = HigherOrderProblem(1, rhs, 1.0, [eta1], eta0.real, problem.level, frozenset({0}), True)

    def recover(sub: Solution) -> Fn:
        def y(x: CdNum) -> CdNum:
            characteristic = trace_characteristic(problem.h, x, problem.alpha0, ctx)
            return solve_along(characteristic, lambda _x, value: sub.y(value), eta0, ctx)

        return y

    return Reduction("autonomous", problem, reduced, recover)


def energy_integral(g: Fn, start: CdNum, end: CdNum) -> CdNum:
    """Two-sided integral ∫[du]g(u) + ∫g(u)[du] along the segment start → end."""
    delta = end - start

    def integrand(t: float) -> CdNum:
        value = g(start + delta * t)
        return delta * value + value * delta

    return fixed_gauss(integrand, 0.0, 1.0, pieces=2)


def _energy(problem: HigherOrderProblem, ctx: Context) -> Reduction:
    """y'' = g(y): (y')² = η_1² + ∫[du]g + ∫g[du], a first-order equation for y."""
    if problem.order != 2 or problem.depends_on_x or problem.uses != {0}:
        raise ShapeMismatch("energy needs y'' = g(y)")
    eta0, eta1 = problem.constant_eta(0), problem.constant_eta(1)
    if "g" in problem.ingredients:
        g = as_function(problem.ingredients["g"], problem.level)
    else:
        zero = CdNum.zero(problem.level)
        g = lambda u: problem.rhs(u, [u, zero])

    def speed(y: CdNum) -> CdNum:
        roots = sqrt_set(eta1 * eta1 + energy_integral(g, eta0, y), ctx)
        if roots.kind is RootKind.SPHERE:
            raise BranchUndefined(f"(y')^2 is negative real at y = {y}")
        return min(roots.points, key=lambda r: abs(r - eta1))

    reduced = HigherOrderProblem(
        1,
        lambda x, ds: speed(ds[0]),
        problem.h,
        [eta0],
        problem.alpha0,
        problem.level,
        frozenset({0}),
        False,
    )
    return Reduction("energy", problem, reduced, lambda sub: sub.y, first_integral=speed)


def _product(problem: HigherOrderProblem, ctx: Context) -> Reduction:
    """
    y'' + y'f(x) + y'g(y)y' = 0 through y' = v(y)·u(x).

    For real f, g and real η_1 the factors separate: u = exp(−∫f) with
    u = 1 on the boundary and v = η_1·exp(−∫g) from η_0, leaving the
    first-order equation [dy/dx].1 = v(y)u(x).
    """
    if problem.order != 2 or not {"f", "g"} <= problem.ingredients.keys():
        raise ShapeMismatch("product needs y'' + y' f(x) + y' g(y) y' = 0 with f and g given")
    if real_constant(problem.h, problem.level, ctx) != 1.0:
        raise ShapeMismatch("product substitution needs h = 1")
    eta0, eta1 = problem.constant_eta(0), problem.constant_eta(1)
    if not eta1.is_real(ctx.tolerance):
        raise ShapeMismatch("product substitution needs a real initial slope")
    f = as_function(problem.ingredients["f"], problem.level)
    g = as_function(problem.ingredients["g"], problem.level)

    def u(x: CdNum) -> CdNum:
        characteristic = trace_characteristic(1.0, x, problem.alpha0, ctx)
        return cd_exp(-characteristic.integrate(f, ctx))

    def v(y: CdNum) -> CdNum:
        delta = y - eta0
        return cd_exp(-fixed_gauss(lambda t: g(eta0 + delta * t) * delta, 0.0, 1.0, pieces=2)) * eta1.real

    reduced = HigherOrderProblem(
        1,
        lambda x, ds: v(ds[0]) * u(x),
        1.0,
        [eta0],
        problem.alpha0,
        problem.level,
        frozenset({0}),
        True,
    )
    return Reduction("product", problem, reduced, lambda sub: sub.y, factors={"u": u, "v": v})


_BUILDERS = {
    "missing_y": _missing_y,
    "autonomous": _autonomous,
    "top_two": _top_two,
    "energy": _energy,
    "product": _product,
}


def reduce_order(problem: HigherOrderProblem, strategy: str, ctx: Optional[Context] = None) -> Reduction:
    """
    Lower the order of ``problem`` with the named strategy.

    Args:
        problem: Higher-order equation
        strategy: One of missing_y, autonomous, top_two, energy, product
        ctx: Numerical context

    Returns:
        Reduction with the lower-order problem and the back-substitution

    Raises:
        ShapeMismatch: the problem does not have the strategy's shape
        ValueError: unknown strategy
    """
    if strategy not in _BUILDERS:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
    ctx = get_context(ctx)
    reduction = _BUILDERS[strategy](problem, ctx)
    logger.debug("%s: order %d -> %d", strategy, problem.order, reduction.reduced.order)
    return reduction


def solve_first_order(
    problem: HigherOrderProblem,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """Solve an order-one HigherOrderProblem as the generic reduced form."""
    if problem.order != 1:
        raise ShapeMismatch(f"expected a first-order problem, got order {problem.order}")
    return solve_reduced(
        lambda x, v: problem.rhs(x, [v]),
        problem.h,
        BoundaryData(problem.alpha0, problem.etas[0]),
        problem.level,
        grid,
        ctx,
    )


def solve_higher_order(
    problem: HigherOrderProblem,
    strategy: str,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Reduce with ``strategy`` until first order, solve, and back-substitute.

    The result is verified against the original equation.
    """
    ctx = get_context(ctx)
    if problem.order == 1:
        return solve_first_order(problem, grid, ctx)
    reduction = reduce_order(problem, strategy, ctx)
    sub = solve_higher_order(reduction.reduced, strategy, grid, ctx)
    solution = Solution(
        OdeKind.REDUCED,
        Representation.GRID_BACKED,
        reduction.recover(sub),
        QUADRATURE_TOL,
        branch_notes=[f"{strategy}: order {problem.order} -> {reduction.reduced.order}"] + sub.branch_notes,
    )
    solution.residual = higher_order_residual(problem, solution, grid, ctx)
    if not solution.residual.passed:
        logger.warning("%s reduction unverified: max residual %.3e", strategy, solution.residual.max_residual)
    return solution


def higher_order_residual(
    problem: HigherOrderProblem,
    solution: Solution,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> ResidualReport:
    """|y^(n) − rhs(x, [y, ..., y^(n−1)])| with nested central differences."""
    ctx = get_context(ctx)
    h = as_function(problem.h, problem.level, 1.0)
    derivatives = [iterated_derivative(solution.y, h, k, ctx) for k in range(problem.order + 1)]

    def at(x: CdNum) -> float:
        values = [d(x) for d in derivatives]
        return abs(values[-1] - problem.rhs(x, values[:-1]))

    points = sample_grid(problem.level, problem.alpha0, grid)
    return residual_report(points, at, solution.tolerance)
