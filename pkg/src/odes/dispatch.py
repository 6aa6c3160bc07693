"""Route an OdeProblem to its solver"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Optional

from ..config import Context, get_context
from ..errors import InvalidParameter
from ..models import GridSpec
from .bernoulli import solve_bernoulli, solve_generalized_bernoulli
from .first_order import (
    solve_homogeneous_ratio,
    solve_linear,
    solve_power_separated,
    solve_separated,
    solve_simplest,
)
from .higher_order import solve_nth_order_iterated
from .implicit import ImplicitResult, solve_clairaut, solve_lagrange, solve_quadratic_in_derivative
from .problem import OdeKind, OdeProblem

logger = logging.getLogger(__name__)

Solver = Callable[[OdeProblem, Optional[GridSpec], Context], ImplicitResult]


def _get(problem: OdeProblem, name: str, default=None):
    value = problem.ingredients.get(name)
    return default if value is None else value


def _simplest(problem, grid, ctx):
    return ImplicitResult(solve_simplest(
        _get(problem, "f", 0.0), _get(problem, "h", 1.0), problem.boundary, problem.level, grid, ctx
    ))


def _linear(problem, grid, ctx):
    return ImplicitResult(solve_linear(
        _get(problem, "b", 0.0), _get(problem, "Q", 0.0), _get(problem, "h", 1.0),
        problem.boundary, problem.level, grid, ctx,
    ))


def _separated(problem, grid, ctx):
    return ImplicitResult(solve_separated(
        _get(problem, "f", 1.0), _get(problem, "s", 0.0), _get(problem, "h", 1.0),
        problem.boundary, None, problem.level, grid, ctx,
    ))


def _power_separated(problem, grid, ctx):
    return ImplicitResult(solve_power_separated(
        _get(problem, "f", 1.0), _get(problem, "s", 0.0), problem.scalar("m"), _get(problem, "h", 1.0),
        problem.boundary, None, problem.level, grid, ctx,
    ))


def _homogeneous(problem, grid, ctx):
    return ImplicitResult(solve_homogeneous_ratio(
        _get(problem, "f", 0.0), _get(problem, "h", 1.0), problem.options.get("side", "right"),
        problem.boundary, problem.level, grid, ctx,
    ))


def _bernoulli(problem, grid, ctx):
    return ImplicitResult(solve_bernoulli(
        _get(problem, "p", 0.0), _get(problem, "s", 0.0), problem.scalar("m"), _get(problem, "h", 1.0),
        problem.boundary, problem.level, grid, ctx,
    ))


def _generalized_bernoulli(problem, grid, ctx):
    return ImplicitResult(solve_generalized_bernoulli(
        _get(problem, "f", 1.0), _get(problem, "p", 0.0), _get(problem, "s", 0.0),
        problem.scalar("k", 1.0), problem.scalar("m"), _get(problem, "h", 1.0),
        problem.boundary, None, problem.level, grid, ctx,
    ))


def _quadratic(problem, grid, ctx):
    return ImplicitResult(solve_quadratic_in_derivative(
        _get(problem, "b", 0.0), _get(problem, "c", 0.0), _get(problem, "h", 1.0),
        int(problem.options.get("root", "0")), problem.boundary, problem.level, grid, ctx,
    ))


def _clairaut(problem, grid, ctx):
    return solve_clairaut(
        _get(problem, "eta", 0.0),
        _get(problem, "phi", 1.0),
        _get(problem, "h", 1.0),
        problem.level,
        grid,
        center=problem.scalar("center", 1.0),
        spread=problem.scalar("spread", 0.5),
        ctx=ctx,
    )


def _lagrange(problem, grid, ctx):
    return solve_lagrange(
        problem.ingredients.get("f"),
        problem.ingredients.get("s"),
        problem.ingredients.get("eta"),
        _get(problem, "h", 1.0),
        commuting_ansatz=problem.options.get("commuting_ansatz", "true").lower() != "false",
        p0=problem.scalar("p0", 2.0),
        x0=problem.scalar("x0", 0.0),
        level=problem.level,
        grid=grid,
        spread=problem.scalar("spread", 0.5),
        ctx=ctx,
    )


def _nth_order(problem, grid, ctx):
    n = int(problem.scalar("n", 1))
    h = _get(problem, "h", 1.0)
    return ImplicitResult(solve_nth_order_iterated(
        n, _get(problem, "g", 0.0), [h] * n, problem.etas, problem.boundary.alpha0, problem.level, grid, ctx
    ))


SOLVERS: Dict[OdeKind, Solver] = {
    OdeKind.SIMPLEST: _simplest,
    OdeKind.LINEAR: _linear,
    OdeKind.SEPARATED: _separated,
    OdeKind.POWER_SEPARATED: _power_separated,
    OdeKind.HOMOGENEOUS: _homogeneous,
    OdeKind.BERNOULLI: _bernoulli,
    OdeKind.GENERALIZED_BERNOULLI: _generalized_bernoulli,
    OdeKind.QUADRATIC: _quadratic,
    OdeKind.CLAIRAUT: _clairaut,
    OdeKind.LAGRANGE: _lagrange,
    OdeKind.NTH_ORDER: _nth_order,
}


def solve_problem(
    problem: OdeProblem,
    grid: Optional[GridSpec] = None,
    ctx: Optional[Context] = None,
) -> ImplicitResult:
    """
    Solve ``problem`` with the solver for its kind.

    Explicit solvers come back as an ImplicitResult without special
    solutions, so callers handle every kind the same way.

    Raises:
        InvalidParameter: the kind has no standalone solver
    """
    ctx = get_context(ctx)
    solver = SOLVERS.get(problem.kind)
    if solver is None:
        raise InvalidParameter(f"{problem.kind.value} problems are produced by reduce_order, not solved directly")
    logger.debug("solving %s problem at level %d", problem.kind.value, problem.level)
    return solver(problem, grid, ctx)
