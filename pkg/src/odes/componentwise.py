"""Real combinations of direction fields and the componentwise linear system"""

from __future__ import annotations

import logging
from typing import Optional, Sequence, Tuple

from ..algebra import CdNum
from ..config import Context, get_context
from ..errors import NonAnalyticInput
from ..phrase import Phrase, phrase_sum
from ..series import CauchyProblem, CauchyState
from .problem import Ingredient, as_function, check_points, check_real, constant_value

logger = logging.getLogger(__name__)


def collapse_real_combination(
    pairs: Sequence[Tuple[Ingredient, Ingredient]],
    level: int = 2,
    ctx: Optional[Context] = None,
) -> Ingredient:
    """
    h(x) = Σ a_j(x)·h_j(x) for real a_j, so that Σ a_j·([dy/dx].h_j) = [dy/dx].h.

    Constants collapse to a CdNum and phrases to a phrase; anything else
    gives a callable.

    Raises:
        NonRealCoefficient: some a_j is not real at a check point
    """
    ctx = get_context(ctx)
    check_real({f"a{j}": a for j, (a, _) in enumerate(pairs)}, check_points(level), level, ctx)

    constants = [(constant_value(a, level), constant_value(h, level)) for a, h in pairs]
    if all(a is not None and h is not None for a, h in constants):
        total = CdNum.zero(level)
        for a, h in constants:
            total = total + h * a.real
        return total

    def as_phrase(obj: Ingredient) -> Optional[Phrase]:
        if isinstance(obj, Phrase):
            return obj
        value = constant_value(obj, level)
        return Phrase.constant(value, level) if value is not None else None

    phrases = [(as_phrase(a), as_phrase(h)) for a, h in pairs]
    if all(a is not None and h is not None for a, h in phrases):
        return phrase_sum([a * h for a, h in phrases])

    functions = [(as_function(a, level), as_function(h, level)) for a, h in pairs]

    def combined(x: CdNum) -> CdNum:
        total = CdNum.zero(max(level, x.level))
        for a, h in functions:
            total = total + h(x) * a(x).real
        return total

    return combined


def linear_componentwise_problem(
    b: Ingredient,
    Q: Ingredient,
    h: CdNum,
    foot: CdNum,
    eta: CdNum,
) -> CauchyProblem:
    """
    The linear equation [dy/dx].h + b·y = Q along the line foot + h·t as a
    power-series Cauchy problem: dy/dt = −b(X(t))·y + Q(X(t)), y(0) = eta.

    The 2^r real components of y evolve together as one algebra-valued
    unknown.

    Raises:
        NonAnalyticInput: b or Q is neither constant nor a phrase
    """
    level = max(h.level, foot.level, eta.level)
    h, foot = h.promote(level), foot.promote(level)

    def series_of(obj: Ingredient, name: str):
        value = constant_value(obj, level)
        if value is not None:
            return lambda _point: value
        if isinstance(obj, Phrase):
            return obj
        raise NonAnalyticInput(f"{name} must be a constant or a phrase for the series view")

    b_of, Q_of = series_of(b, "b"), series_of(Q, "Q")

    def rhs(state: CauchyState):
        point = state.t * h + foot
        return -(b_of(point) * state.u[0]) + Q_of(point)

    return CauchyProblem([rhs], [eta.promote(level)], level)
