"""The flow map ω_h with (dω/dx).1 = h(ω), ω(α) = α"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

from ..algebra import CdNum
from ..calculus import SeriesFn
from ..config import Context, get_context
from ..errors import NonAnalyticInput, NotLeftReducible, OctodeError, SeriesDiverged, ZeroVectorField
from ..functions import cd_exp, cd_pow_real
from ..phrase import Phrase, left_decompose
from ..series import CauchyProblem, cauchy_series_solve
from .problem import Fn, Ingredient, constant_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OmegaMap:
    """
    ω_h around α.

    Evaluates through ``closed`` when the field was recognized and through
    the Taylor series otherwise. ``series`` is None only for constant fields.
    """

    alpha: CdNum
    series: Optional[SeriesFn]
    closed: Optional[Fn] = None
    name: str = "omega"

    @property
    def is_closed_form(self) -> bool:
        return self.closed is not None

    @property
    def radius(self) -> float:
        if self.closed is not None or self.series is None:
            return math.inf
        return self.series.radius

    def __call__(self, x: CdNum) -> CdNum:
        if self.closed is not None:
            return self.closed(x.promote(max(x.level, self.alpha.level)))
        return self.series(x)


def _power_field(h: Phrase) -> Optional[tuple[float, int]]:
    """(c, n) when h(z) = c·z^n with real c."""
    try:
        shapes = left_decompose(h)
    except NotLeftReducible:
        return None
    if len(shapes) != 1:
        return None
    shape = shapes[0]
    if shape.a is not None or shape.b is not None or not shape.has_var or shape.n == 0:
        return None
    return shape.coeff, shape.n


def _closed_flow(c: float, n: int, alpha: CdNum, ctx: Context) -> tuple[Fn, str]:
    if n == 1:
        return (lambda x: alpha * cd_exp((x - alpha) * c)), f"alpha*exp({c!r}*(x - alpha))"
    start = cd_pow_real(alpha, 1.0 - n, ctx)
    exponent = 1.0 / (1.0 - n)
    rate = (1.0 - n) * c

    def omega(x: CdNum) -> CdNum:
        return cd_pow_real(start + (x - alpha) * rate, exponent, ctx)

    return omega, f"(alpha^{1 - n} + {rate!r}*(x - alpha))^(1/{1 - n})"


def solve_omega(
    h: Ingredient,
    alpha: CdNum,
    order: int = 16,
    evaluation_range: Optional[float] = None,
    ctx: Optional[Context] = None,
) -> OmegaMap:
    """
    ω_h around α.

    The series coefficients come from (dω/dx).1 = h(ω) taken along the
    real direction: c_{k+1} is the degree-k coefficient of h(ω) over k+1.
    Closed forms replace the series for

    - h = c constant: ω = α + c(x − α)
    - h = c·z: ω = α·exp(c(x − α))
    - h = c·z^n, n ≠ 1: ω = (α^{1−n} + (1−n)c(x − α))^{1/(1−n)}

    A power closed form is kept only if it returns α at α on the
    principal branch.

    Args:
        h: Constant or phrase
        alpha: Marked point, ω(α) = α
        order: Truncation order
        evaluation_range: Distance from α where the map will be used
        ctx: Numerical context

    Returns:
        OmegaMap with the series and, when recognized, the closed form

    Raises:
        ZeroVectorField: h(α) vanishes
        SeriesDiverged: no closed form and the radius estimate is below evaluation_range
        NonAnalyticInput: h is neither constant nor a phrase
    """
    ctx = get_context(ctx)
    constant = constant_value(h, alpha.level)
    if constant is not None:
        if abs(constant) <= ctx.tolerance:
            raise ZeroVectorField("h is the zero constant")
        level = max(alpha.level, constant.level)
        alpha = alpha.promote(level)
        constant = constant.promote(level)
        line = SeriesFn.from_cd_taylor([alpha, constant], alpha, math.inf, name="alpha + c*(x - alpha)")
        return OmegaMap(alpha, line, lambda x: alpha + constant * (x - alpha), line.name)
    if not isinstance(h, Phrase):
        raise NonAnalyticInput(f"omega expansion needs a phrase field, got {type(h).__name__}")

    level = max(h.level, alpha.level)
    alpha = alpha.promote(level)
    if abs(h(alpha)) <= ctx.tolerance:
        raise ZeroVectorField(f"h({alpha}) vanishes")
    solution = cauchy_series_solve(CauchyProblem([h], [alpha], level), order=order, ctx=ctx)
    coeffs = [solution.coefficient(0, k) for k in range(order + 1)]
    radius = solution.radius
    logger.debug("omega series radius %.4g", radius)
    series = SeriesFn.from_cd_taylor(coeffs, alpha, radius, name="omega")

    power = _power_field(h)
    if power is not None:
        closed, name = _closed_flow(*power, alpha, ctx)
        try:
            anchored = closed(alpha).isclose(alpha, 1e3 * ctx.tolerance * max(1.0, abs(alpha)))
        except OctodeError:
            anchored = False
        if anchored:
            return OmegaMap(alpha, series, closed, name)
        logger.debug("closed form %s misses alpha on the principal branch; keeping the series", name)

    if evaluation_range is not None and radius < evaluation_range:
        raise SeriesDiverged(f"radius estimate {radius:.4g} is below the requested range {evaluation_range:.4g}")
    return OmegaMap(alpha, series, None, "omega")
