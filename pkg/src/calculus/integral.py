"""Non-commutative line integrals along polyline paths"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Callable, Optional, Union

from ..algebra import CdNum, LinOpR, Path
from ..config import Context, get_context
from ..errors import NotIntegrable, NotLeftReducible
from ..functions import cd_ln, continue_ln_along_path, ln_branch_derivative, nearest_log
from ..phrase import LeftShape, Phrase, Term, diff_phrase, left_decompose
from .quadrature import integrate_interval
from .series_fn import SeriesFn

logger = logging.getLogger(__name__)

Hat = Callable[[CdNum, CdNum], CdNum]


class IntegralMode(str, Enum):
    """How a line integral is evaluated"""
    SYMBOLIC = "symbolic"
    QUADRATURE = "quadrature"


def _split_log_terms(p: Phrase) -> tuple[Phrase, list[LeftShape]]:
    """Left-algorithm primitive of the power terms, plus the z^{-1} terms."""
    try:
        shapes = left_decompose(p)
    except NotLeftReducible as e:
        raise NotIntegrable(f"{p} has no left-algorithm antiderivative: {e}") from e
    power_terms = []
    logs = []
    for shape in shapes:
        if shape.n == -1:
            logs.append(shape)
        else:
            power_terms.append(Term(shape.coeff / (shape.n + 1), shape.node(shape.n + 1)))
    return Phrase(power_terms, p.level), logs


def _wrap(shape: LeftShape, value: CdNum) -> CdNum:
    if shape.a is not None:
        value = shape.a * value
    if shape.b is not None:
        value = value * shape.b
    return value * shape.coeff


def _symbolic(f: Union[Phrase, SeriesFn], path: Path, ctx: Context) -> CdNum:
    level = max(path.level, f.level)
    alpha, beta = path.start.promote(level), path.end.promote(level)
    if isinstance(f, SeriesFn):
        try:
            primitive = f.antiderivative()
        except NotLeftReducible as e:
            raise NotIntegrable(f"series {f.name!r} is not termwise integrable: {e}") from e
        return primitive(beta) - primitive(alpha)
    primitive, logs = _split_log_terms(f)
    total = primitive(beta) - primitive(alpha)
    if logs:
        start = cd_ln(alpha, ctx)
        end = continue_ln_along_path(path, start, ctx)
        for shape in logs:
            total = total + _wrap(shape, end - start)
    return total


def hat_operator(f: Union[Phrase, SeriesFn, Callable[[CdNum], CdNum]]) -> Hat:
    """
    The operator f̂(z).h = [dg(z)/dz].h of the left-algorithm primitive g.

    A plain callable is taken in the commuting sense f̂(z).h = f(z)·h.
    """
    if isinstance(f, SeriesFn):
        primitive = f.antiderivative()
        return primitive.apply_derivative
    if isinstance(f, Phrase):
        primitive, logs = _split_log_terms(f)
        derivative = diff_phrase(primitive)

        def hat(z: CdNum, h: CdNum, branch: Optional[CdNum] = None) -> CdNum:
            value = derivative(z, h)
            if logs:
                branch = branch if branch is not None else cd_ln(z)
                dlog = ln_branch_derivative(z, h, branch)
                for shape in logs:
                    value = value + _wrap(shape, dlog)
            return value

        hat.needs_branch = bool(logs)
        return hat
    return lambda z, h: f(z) * h


def integrate_hat(hat: Hat, path: Path, ctx: Optional[Context] = None) -> CdNum:
    """∫_γ f̂(γ(t)).γ'(t) dt, segment by segment."""
    ctx = get_context(ctx)
    total = CdNum.zero(path.level)
    needs_branch = getattr(hat, "needs_branch", False)
    branch = cd_ln(path.start, ctx) if needs_branch else None
    for a, b in path.segments():
        delta = b - a
        if needs_branch:
            anchor = branch

            def integrand(t: float, a=a, delta=delta, anchor=anchor) -> CdNum:
                z = a + delta * t
                return hat(z, delta, nearest_log(z, anchor, ctx))

            branch = continue_ln_along_path(Path.straight(a, b), branch, ctx)
        else:
            def integrand(t: float, a=a, delta=delta) -> CdNum:
                return hat(a + delta * t, delta)

        total = total + integrate_interval(integrand, 0.0, 1.0, ctx)
    return total


def integrate_form(op: Callable[[CdNum], LinOpR], path: Path, ctx: Optional[Context] = None) -> CdNum:
    """∫_γ A(γ(t)).γ'(t) dt for an operator-valued integrand."""
    return integrate_hat(lambda z, h: op(z).apply(h), path, ctx)


def line_integral(
    f: Union[Phrase, SeriesFn, Callable[[CdNum], CdNum]],
    path: Path,
    mode: Union[IntegralMode, str] = IntegralMode.SYMBOLIC,
    ctx: Optional[Context] = None,
    hat: Optional[Hat] = None,
) -> CdNum:
    """
    Line integral ∫_γ f(z) dz in the left-algorithm sense.

    Args:
        f: Phrase, SeriesFn, or plain callable (quadrature mode only)
        path: Integration path
        mode: symbolic (g(β) − g(α)) or quadrature (∫ f̂(γ).γ')
        ctx: Numerical context
        hat: Explicit f̂ overriding the one derived from f

    Returns:
        The integral

    Raises:
        NotIntegrable: symbolic mode on an integrand without a left-algorithm primitive
        QuadratureNonConvergent: quadrature failed to converge
    """
    ctx = get_context(ctx)
    mode = IntegralMode(mode)
    if mode is IntegralMode.SYMBOLIC:
        if not isinstance(f, (Phrase, SeriesFn)):
            raise NotIntegrable("symbolic integration needs a phrase or series integrand")
        return _symbolic(f, path, ctx)
    operator = hat if hat is not None else hat_operator(f)
    result = integrate_hat(operator, path, ctx)
    logger.debug("quadrature integral over %d segments: %s", path.segment_count, result)
    return result
