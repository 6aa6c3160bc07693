"""Iterated n-th order equations (...(y^(n).h_1)...).h_n = g(x)"""

from __future__ import annotations

import logging
import math
from typing import List, Optional, Sequence

from ..algebra import CdNum
from ..calculus import integrate_interval
from ..config import Context, get_context
from ..errors import NegativePowerOne, NotLeftReducible, ShapeMismatch
from ..models import GridSpec
from ..phrase import Phrase, antiderivative_left, compose_phrase
from .characteristics import Characteristic, trace_characteristic
from .first_order import boundary_phrase, imaginary_phrase, real_constant
from .problem import (
    CLOSED_FORM_TOL,
    QUADRATURE_TOL,
    BoundaryData,
    Fn,
    Ingredient,
    OdeKind,
    OdeProblem,
    Representation,
    Solution,
    as_function,
    constant_value,
    ingredient_level,
)
from .residual import attach_residual

logger = logging.getLogger(__name__)


def common_field(h_list: Sequence[Ingredient], level: int, ctx: Context) -> Ingredient:
    """
    The single field shared by every h_j.

    Raises:
        ShapeMismatch: the fields differ
    """
    if not h_list:
        return 1.0
    first = h_list[0]
    first_value = constant_value(first, level)
    for other in h_list[1:]:
        if other is first:
            continue
        value = constant_value(other, level)
        if first_value is None or value is None or not value.isclose(first_value, ctx.tolerance):
            raise ShapeMismatch("iterated equations need the same field h in every slot")
    return first


def iterated_value(
    characteristic: Characteristic,
    g: Fn,
    etas: Sequence[Fn],
    n: int,
    ctx: Context,
) -> CdNum:
    """
    Σ_{k<n} η_k(Im foot) S^k/k! + ∫_0^S (S − σ)^{n−1}/(n−1)! g(X(σ)) dσ, S the span.
    """
    span = characteristic.span
    foot = characteristic.foot
    total = CdNum.zero(characteristic.target.level)
    for k, eta in enumerate(etas[:n]):
        total = total + eta(foot.imag) * (span ** k / math.factorial(k))
    if span == 0.0:
        return total
    scale = 1.0 / math.factorial(n - 1)

    def integrand(sigma: float) -> CdNum:
        return g(characteristic.point(sigma)) * ((span - sigma) ** (n - 1) * scale)

    return total + integrate_interval(integrand, 0.0, span, ctx)


def _iterated_phrase(
    g: Phrase,
    etas: Sequence[Ingredient],
    n: int,
    c: float,
    alpha0: float,
    level: int,
) -> Optional[Phrase]:
    """
    Closed form for a real constant field c and left-integrable g.

    With [DG_j].1 = G_{j−1}, G_0 = g and q = alpha0 + Im z,
    y = Σ η_k(Im z)·((Re z − alpha0)/c)^k/k! + c^{−n}[G_n(z) − Σ_{k<n} G_{n−k}(q)(Re z − alpha0)^k/k!].
    """
    primitives = [g]
    try:
        for _ in range(n):
            primitives.append(antiderivative_left(primitives[-1]))
    except (NotLeftReducible, NegativePowerOne):
        return None
    level = max([level] + [p.level for p in primitives])
    z = Phrase.variable(level)
    distance = (z + Phrase.conj_variable(level)) * 0.5 - alpha0
    foot = imaginary_phrase(level) + alpha0

    boundary = Phrase.constant(0.0, level)
    for k, eta in enumerate(etas[:n]):
        eta_phrase = boundary_phrase(BoundaryData(alpha0, eta), level)
        if eta_phrase is None:
            return None
        boundary = boundary + eta_phrase * ((distance ** k) * (1.0 / (math.factorial(k) * c ** k)))

    remainder = primitives[n]
    for k in range(n):
        shifted = compose_phrase(primitives[n - k], foot)
        remainder = remainder - shifted * ((distance ** k) * (1.0 / math.factorial(k)))
    return boundary + remainder * (1.0 / c ** n)


def solve_nth_order_iterated(
    n: int,
    g: Ingredient,
    h_list: Optional[Sequence[Ingredient]] = None,
    etas: Optional[Sequence[Ingredient]] = None,
    alpha0: float = 0.0,
    level: int = 2,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> Solution:
    """
    Solve (...(y^(n)(x).h)...).h = g(x) with the iterated derivatives
    (...(y^(k).h)...).h = η_k(Im x) on Re x = alpha0, k < n.

    Along a characteristic the left side is the n-th τ-derivative, so y is
    the Taylor polynomial of the boundary data plus the iterated integral
    of g.

    Args:
        n: Order, n ≥ 1
        g: Right-hand side
        h_list: Fields h_1..h_n; they must coincide
        etas: η_0..η_{n−1}; missing entries are zero
        alpha0: Boundary hyperplane
        level: Algebra level
        grid: Residual grid
        ctx: Numerical context

    Raises:
        ShapeMismatch: n < 1 or the fields differ
    """
    if n < 1:
        raise ShapeMismatch(f"order must be at least 1, got {n}")
    ctx = get_context(ctx)
    h_list = list(h_list or [1.0])
    etas = list(etas or []) + [0.0] * max(0, n - len(etas or []))
    level = ingredient_level(level, g, *h_list, *etas)
    h = common_field(h_list, level, ctx)
    problem = OdeProblem(
        OdeKind.NTH_ORDER,
        level,
        {"g": g, "h": h},
        scalars={"n": n},
        boundary=BoundaryData(alpha0, etas[0]),
        etas=etas,
    )

    c = real_constant(h, level, ctx)
    if c is not None and isinstance(g, Phrase):
        phrase = _iterated_phrase(g, etas, n, c, alpha0, level)
        if phrase is not None:
            solution = Solution.from_phrase(problem.kind, phrase, CLOSED_FORM_TOL)
            return attach_residual(problem, solution, grid, ctx)

    g_fn = problem.fn("g")
    eta_fns: List[Fn] = [as_function(eta, level) for eta in etas]

    def y(x: CdNum) -> CdNum:
        characteristic = trace_characteristic(h, x, alpha0, ctx)
        return iterated_value(characteristic, g_fn, eta_fns, n, ctx)

    solution = Solution(problem.kind, Representation.GRID_BACKED, y, QUADRATURE_TOL)
    return attach_residual(problem, solution, grid, ctx)
