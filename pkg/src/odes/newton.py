"""Damped Newton inversion of maps A_r → A_r"""

from __future__ import annotations

import logging
from typing import Callable, Optional

import numpy as np

from ..algebra import CdNum, LinOpR
from ..calculus import frechet_derivative
from ..config import Context, get_context
from ..errors import NewtonNonConvergent, OctodeError, SingularJacobian
from ..phrase import Phrase, total_derivative

logger = logging.getLogger(__name__)

Jacobian = Callable[[CdNum], LinOpR]

COND_LIMIT = 1e12


def jacobian_of(g, ctx: Optional[Context] = None) -> Jacobian:
    """Exact Fréchet matrix for phrases, central differences otherwise."""
    if isinstance(g, Phrase):
        operator = total_derivative(g)
        return lambda y: operator.to_linop(y.promote(max(y.level, g.level)))
    return lambda y: frechet_derivative(g, y, ctx)


def _misfit(g: Callable[[CdNum], CdNum], y: CdNum, target: CdNum) -> Optional[CdNum]:
    try:
        value = g(y) - target
    except (OctodeError, ArithmeticError):
        return None
    if not np.all(np.isfinite(value.coeffs)):
        return None
    return value


def newton_solve(
    g: Callable[[CdNum], CdNum],
    target: CdNum,
    guess: CdNum,
    jacobian: Optional[Jacobian] = None,
    ctx: Optional[Context] = None,
) -> CdNum:
    """
    Solve g(y) = target over R^{2^r}.

    Each step solves J·δ = −(g(y) − target) with the real Jacobian matrix
    and halves δ while the misfit grows, up to ``damping_halvings`` times.

    Args:
        g: Map to invert
        target: Right-hand side
        guess: Starting point
        jacobian: y ↦ Fréchet matrix of g; defaults to :func:`jacobian_of`
        ctx: Numerical context

    Returns:
        y with a final step below newton_step_tol·(1 + |y|)

    Raises:
        SingularJacobian: the Jacobian is singular at an iterate
        NewtonNonConvergent: no converged step within newton_max_iter iterations
    """
    ctx = get_context(ctx)
    jacobian = jacobian or jacobian_of(g, ctx)
    level = max(target.level, guess.level)
    y = guess.promote(level)
    misfit = _misfit(g, y, target)
    if misfit is None:
        raise NewtonNonConvergent(f"map cannot be evaluated at the starting point {y}")

    for iteration in range(ctx.newton_max_iter):
        if abs(misfit) == 0.0:
            return y
        matrix = jacobian(y).matrix
        cond = np.linalg.cond(matrix)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise SingularJacobian(f"Jacobian singular at {y} (condition number {cond:.3e})")
        delta = np.linalg.solve(matrix, -misfit.promote(level).coeffs)

        scale = 1.0
        for _ in range(ctx.damping_halvings):
            candidate = CdNum(y.coeffs + scale * delta)
            candidate_misfit = _misfit(g, candidate, target)
            if candidate_misfit is not None and abs(candidate_misfit) <= abs(misfit):
                break
            scale *= 0.5
        else:
            raise NewtonNonConvergent(f"damping exhausted at iteration {iteration} near {y}")

        y, misfit = candidate, candidate_misfit
        step = scale * float(np.linalg.norm(delta))
        logger.debug("newton %d: step %.3e misfit %.3e", iteration, step, abs(misfit))
        if step <= ctx.newton_step_tol * (1.0 + abs(y)):
            return y

    raise NewtonNonConvergent(
        f"no convergence in {ctx.newton_max_iter} iterations (misfit {abs(misfit):.3e})"
    )


def newton_continuation(
    g: Callable[[CdNum], CdNum],
    target: CdNum,
    start: CdNum,
    jacobian: Optional[Jacobian] = None,
    steps: int = 8,
    ctx: Optional[Context] = None,
) -> CdNum:
    """
    Newton along the homotopy g(y) = g(start) + t·(target − g(start)), t = 1/steps .. 1.

    ``start`` must be a point where g is known, so t = 0 is solved exactly.
    """
    base = g(start)
    y = start
    for k in range(1, steps + 1):
        y = newton_solve(g, base + (target - base) * (k / steps), y, jacobian, ctx)
    return y


def invert(
    g: Callable[[CdNum], CdNum],
    target: CdNum,
    start: CdNum,
    guess: Optional[CdNum] = None,
    jacobian: Optional[Jacobian] = None,
    ctx: Optional[Context] = None,
) -> CdNum:
    """Newton from ``guess`` (or ``start``); on failure retry by continuation from ``start``."""
    try:
        return newton_solve(g, target, guess if guess is not None else start, jacobian, ctx)
    except (NewtonNonConvergent, SingularJacobian) as e:
        logger.debug("direct newton failed (%s), continuing from %s", e, start)
        return newton_continuation(g, target, start, jacobian, ctx=ctx)
