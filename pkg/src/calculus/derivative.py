"""Fréchet derivatives as real-linear operators"""

from __future__ import annotations

from typing import Callable, Optional, Union

import numpy as np

from ..algebra import CdNum, LinOpR
from ..config import Context, get_context
from ..errors import EvaluationFailure, OctodeError
from ..functions import RealAnalytic
from ..phrase import Phrase, total_derivative
from .series_fn import SeriesFn

Evaluatable = Union[Phrase, SeriesFn, RealAnalytic, Callable[[CdNum], CdNum]]


def _safe_call(fn: Callable[[CdNum], CdNum], z: CdNum) -> CdNum:
    try:
        value = fn(z)
    except OctodeError:
        raise
    except (ArithmeticError, ValueError) as e:
        raise EvaluationFailure(f"evaluation failed at {z}: {e}") from e
    if not np.all(np.isfinite(value.coeffs)):
        raise EvaluationFailure(f"non-finite value at {z}")
    return value


def fd_step(z: CdNum, ctx: Optional[Context] = None) -> float:
    return get_context(ctx).fd_step * max(1.0, abs(z))


def directional_fd(
    fn: Callable[[CdNum], CdNum],
    z: CdNum,
    h: CdNum,
    ctx: Optional[Context] = None,
    stencil: int = 3,
) -> CdNum:
    """
    Central difference of fn at z along h.

    Args:
        fn: Function of one algebra variable
        z: Base point
        h: Direction
        ctx: Numerical context
        stencil: 3 or 5 points

    Returns:
        Approximation of [Df(z)].h
    """
    step = fd_step(z, ctx)
    if stencil == 5:
        f2p = _safe_call(fn, z + h * (2 * step))
        f1p = _safe_call(fn, z + h * step)
        f1m = _safe_call(fn, z - h * step)
        f2m = _safe_call(fn, z - h * (2 * step))
        return (f1p * 8.0 - f1m * 8.0 - f2p + f2m) * (1.0 / (12.0 * step))
    return (_safe_call(fn, z + h * step) - _safe_call(fn, z - h * step)) * (0.5 / step)


def finite_difference_derivative(
    fn: Callable[[CdNum], CdNum],
    z: CdNum,
    ctx: Optional[Context] = None,
) -> LinOpR:
    """Column-by-column central differences over the basis directions."""
    level = z.level
    columns = [directional_fd(fn, z, CdNum.basis(k, level), ctx).promote(level).coeffs for k in range(1 << level)]
    return LinOpR(level, np.column_stack(columns))


def frechet_derivative(f: Evaluatable, z: CdNum, ctx: Optional[Context] = None) -> LinOpR:
    """
    Derivative of f at z as a 2^r × 2^r real matrix.

    Phrases, series and real-analytic lifts are differentiated exactly;
    other callables by central differences with step fd_step·max(1, |z|).

    Raises:
        EvaluationFailure: f cannot be evaluated near z
    """
    if isinstance(f, Phrase):
        level = max(z.level, f.level)
        return total_derivative(f).to_linop(z.promote(level))
    if isinstance(f, (SeriesFn, RealAnalytic)):
        return f.derivative(z)
    return finite_difference_derivative(f, z, ctx)
