"""Load JSON problem files and build solver inputs from them"""

import json
import logging
from pathlib import Path
from typing import List, Union

from ..algebra import CdNum
from ..errors import InvalidParameter
from ..models import ProblemFile
from ..odes import BoundaryData, OdeKind, OdeProblem
from ..phrase import Phrase, parse_expression
from ..series import CauchyProblem, HighOrderSystem, reduce_to_first_order

logger = logging.getLogger(__name__)

SERIES_KIND = "series"


def load_problem_file(path: Union[str, Path]) -> ProblemFile:
    """
    Read and validate a problem file.

    Raises:
        pydantic.ValidationError: the document does not match ProblemFile
        json.JSONDecodeError: the file is not JSON
    """
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    problem_file = ProblemFile.model_validate(data)
    logger.debug("loaded %s problem from %s", problem_file.kind, path)
    return problem_file


def _value(text: str, level: int) -> Union[Phrase, CdNum]:
    """A constant expression becomes a CdNum, anything else stays a phrase."""
    phrase = parse_expression(text, level)
    if phrase.is_constant:
        return phrase(CdNum.zero(max(level, phrase.level)))
    return phrase


def to_ode_problem(problem_file: ProblemFile) -> OdeProblem:
    """
    Build the OdeProblem a problem file describes.

    Raises:
        InvalidParameter: unknown kind, or a series problem
        ExpressionSyntaxError: an expression does not parse
    """
    level = problem_file.algebra_level
    try:
        kind = OdeKind(problem_file.kind)
    except ValueError:
        known = ", ".join(k.value for k in OdeKind)
        raise InvalidParameter(f"unknown kind {problem_file.kind!r}; expected one of: {known}, {SERIES_KIND}")
    if kind is OdeKind.REDUCED:
        raise InvalidParameter("reduced problems are produced by reduce_order, not read from files")

    ingredients = {name: _value(text, level) for name, text in problem_file.ingredients.items()}
    boundary = problem_file.boundary
    return OdeProblem(
        kind,
        level,
        ingredients,
        scalars=dict(problem_file.scalars),
        boundary=BoundaryData(boundary.alpha0, _value(boundary.eta, level)),
        etas=[_value(text, level) for text in boundary.etas],
        options=dict(problem_file.options),
    )


def to_series_problem(problem_file: ProblemFile) -> CauchyProblem:
    """
    Build a Cauchy problem from ingredients F0, F1, ... (phrases in the
    unknown) and the initial values.

    With ``orders`` the equations are u_j^(n_j) = F_j(u_j) and ``initial``
    lists u_j(t0), u_j'(t0), ... unknown by unknown.

    Raises:
        InvalidParameter: the kind is not "series" or the counts disagree
    """
    if problem_file.kind != SERIES_KIND:
        raise InvalidParameter(f"expected a {SERIES_KIND} problem, got {problem_file.kind!r}")
    level = problem_file.algebra_level
    names = sorted(problem_file.ingredients, key=lambda name: int(name[1:]) if name[1:].isdigit() else name)
    if not names or any(not name.startswith("F") for name in names):
        raise InvalidParameter("series problems need ingredients named F0, F1, ...")
    rhs = [parse_expression(problem_file.ingredients[name], level) for name in names]
    initial: List[Union[Phrase, CdNum]] = [_value(text, level) for text in problem_file.initial]
    orders = list(problem_file.orders) or [1] * len(rhs)
    if len(orders) != len(rhs):
        raise InvalidParameter(f"{len(rhs)} equations but {len(orders)} orders")
    if len(initial) != sum(orders):
        raise InvalidParameter(f"expected {sum(orders)} initial values, got {len(initial)}")
    t0 = float(problem_file.scalars.get("t0", 0.0))

    if all(n == 1 for n in orders):
        return CauchyProblem(rhs, initial, level, t0=t0)
    groups, position = [], 0
    for n in orders:
        groups.append(initial[position: position + n])
        position += n
    return reduce_to_first_order(HighOrderSystem(orders, rhs, groups, level, t0=t0))
