"""Characteristic curves of a vector field h through the boundary hyperplane"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from ..algebra import CdNum
from ..calculus import integrate_interval
from ..config import Context, get_context
from ..errors import EvaluationFailure, NonTransversalField, ZeroVectorField
from .problem import Fn, Ingredient, as_function, constant_value

logger = logging.getLogger(__name__)

IVP_METHOD = "DOP853"
TRANSVERSAL_TOL = 1e-12


@dataclass(frozen=True)
class Characteristic:
    """
    The curve X(τ) with X(0) = foot on Re x = alpha0, dX/dτ = h(X) and
    X(span) = target.
    """

    foot: CdNum
    span: float
    target: CdNum
    direction: Optional[CdNum] = None
    _dense: Optional[Callable[[float], np.ndarray]] = None

    def point(self, tau: float) -> CdNum:
        if self.direction is not None:
            return self.foot + self.direction * tau
        # the backward trace runs σ = span - τ
        return CdNum(self._dense(self.span - tau))

    def integrate(self, fn: Fn, ctx: Optional[Context] = None) -> CdNum:
        """∫_0^span fn(X(τ)) dτ."""
        if self.span == 0.0:
            return fn(self.foot) * 0.0
        return integrate_interval(lambda tau: fn(self.point(tau)), 0.0, self.span, ctx)


def _check_field(value: CdNum, x: CdNum) -> None:
    size = abs(value)
    if size <= TRANSVERSAL_TOL:
        raise ZeroVectorField(f"h vanishes at {x}")
    if abs(value.real) <= TRANSVERSAL_TOL * max(1.0, size):
        raise NonTransversalField(f"h({x}) = {value} is parallel to the boundary hyperplane")


def trace_characteristic(
    h: Ingredient,
    x: CdNum,
    alpha0: float,
    ctx: Optional[Context] = None,
) -> Characteristic:
    """
    Follow the characteristic through x back to the hyperplane Re x = alpha0.

    Args:
        h: Vector field; constants give straight lines
        x: Target point
        alpha0: Real part of the boundary hyperplane
        ctx: Numerical context

    Returns:
        Characteristic with its foot point and parameter span

    Raises:
        ZeroVectorField: h vanishes at x
        NonTransversalField: h is tangent to the hyperplane or never reaches it
    """
    ctx = get_context(ctx)
    constant = constant_value(h, x.level)
    if constant is not None:
        level = max(constant.level, x.level)
        x = x.promote(level)
        _check_field(constant, x)
        span = (x.real - alpha0) / constant.real
        foot = (x - constant.promote(level) * span)
        return Characteristic(foot, span, x, direction=constant.promote(level))

    field_fn = as_function(h, x.level)
    start = field_fn(x)
    _check_field(start, x)
    if x.real == alpha0:
        return Characteristic(x, 0.0, x, direction=start)
    level = max(start.level, x.level)
    x = x.promote(level)

    def backward(_sigma: float, coords: np.ndarray) -> np.ndarray:
        return -field_fn(CdNum(coords)).promote(level).coeffs

    def hits_boundary(_sigma: float, coords: np.ndarray) -> float:
        return coords[0] - alpha0

    hits_boundary.terminal = True
    # σ runs forward when going against h lowers the real part toward alpha0
    sign = 1.0 if start.real * (x.real - alpha0) > 0 else -1.0
    horizon = sign * (10.0 * abs(x.real - alpha0) / abs(start.real) + 1.0)
    result = solve_ivp(
        backward,
        (0.0, horizon),
        x.coeffs.copy(),
        method=IVP_METHOD,
        rtol=ctx.ivp_rtol,
        atol=ctx.ivp_atol,
        events=hits_boundary,
        dense_output=True,
    )
    if not result.success:
        raise EvaluationFailure(f"characteristic trace from {x} failed: {result.message}")
    if len(result.t_events[0]) == 0:
        raise NonTransversalField(f"the characteristic through {x} does not reach Re x = {alpha0}")
    span = float(result.t_events[0][0])
    foot = CdNum(result.y_events[0][0])
    logger.debug("characteristic through %s: span %.6g, foot %s", x, span, foot)
    return Characteristic(foot, span, x, _dense=result.sol)


def solve_along(
    characteristic: Characteristic,
    rhs: Callable[[CdNum, CdNum], CdNum],
    initial: CdNum,
    ctx: Optional[Context] = None,
) -> CdNum:
    """
    Integrate dy/dτ = rhs(X(τ), y) from the foot to the target.

    Args:
        characteristic: Curve to follow
        rhs: (x, y) ↦ dy/dτ
        initial: y at the foot
        ctx: Numerical context

    Returns:
        y at the target point
    """
    ctx = get_context(ctx)
    if characteristic.span == 0.0:
        return initial
    level = max(initial.level, characteristic.target.level)

    def fun(tau: float, coords: np.ndarray) -> np.ndarray:
        value = rhs(characteristic.point(tau), CdNum(coords))
        return value.promote(level).coeffs

    result = solve_ivp(
        fun,
        (0.0, characteristic.span),
        initial.promote(level).coeffs.copy(),
        method=IVP_METHOD,
        rtol=ctx.ivp_rtol,
        atol=ctx.ivp_atol,
    )
    if not result.success:
        raise EvaluationFailure(f"integration along the characteristic failed: {result.message}")
    return CdNum(result.y[:, -1])


def flow(h: Ingredient, x: CdNum, tau: float, ctx: Optional[Context] = None) -> CdNum:
    """The point reached from x after time τ along dX/dτ = h(X)."""
    ctx = get_context(ctx)
    constant = constant_value(h, x.level)
    if constant is not None:
        return x + constant * tau
    if tau == 0.0:
        return x
    field_fn = as_function(h, x.level)
    level = x.level
    result = solve_ivp(
        lambda _t, coords: field_fn(CdNum(coords)).promote(level).coeffs,
        (0.0, tau),
        x.coeffs.copy(),
        method=IVP_METHOD,
        rtol=ctx.ivp_rtol,
        atol=ctx.ivp_atol,
    )
    if not result.success:
        raise EvaluationFailure(f"flow from {x} failed: {result.message}")
    return CdNum(result.y[:, -1])
