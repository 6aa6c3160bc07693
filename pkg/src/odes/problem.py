"""Problem, boundary and solution types shared by the ODE solvers"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from ..algebra import CdNum
from ..config import Context, get_context
from ..errors import NonRealCoefficient
from ..models import ResidualReport
from ..phrase import Phrase

logger = logging.getLogger(__name__)

Fn = Callable[[CdNum], CdNum]
Ingredient = Union[Phrase, CdNum, float, int, Callable[..., CdNum]]

CLOSED_FORM_TOL = 1e-8
QUADRATURE_TOL = 1e-7
NEWTON_TOL = 1e-6


class OdeKind(str, Enum):
    """Equation classes handled by the solvers"""
    SIMPLEST = "simplest"
    LINEAR = "linear"
    SEPARATED = "separated"
    POWER_SEPARATED = "power_separated"
    HOMOGENEOUS = "homogeneous"
    BERNOULLI = "bernoulli"
    GENERALIZED_BERNOULLI = "generalized_bernoulli"
    QUADRATIC = "quadratic"
    CLAIRAUT = "clairaut"
    LAGRANGE = "lagrange"
    NTH_ORDER = "nth_order"
    REDUCED = "reduced"


class Representation(str, Enum):
    """How a solution is carried"""
    CLOSED_FORM = "closed_form"
    SERIES = "series"
    PARAMETRIC = "parametric"
    GRID_BACKED = "grid_backed"


def constant_value(obj: Ingredient, level: int) -> Optional[CdNum]:
    """Value of a constant ingredient, None when it varies."""
    if isinstance(obj, CdNum):
        return obj.promote(max(obj.level, level))
    if isinstance(obj, (int, float)):
        return CdNum.real_number(float(obj), level)
    if isinstance(obj, Phrase) and obj.is_constant:
        return obj(CdNum.zero(max(level, obj.level)))
    return None


def as_function(obj: Optional[Ingredient], level: int, default: float = 0.0) -> Fn:
    """Turn an ingredient into a function of one algebra variable."""
    if obj is None:
        obj = default
    value = constant_value(obj, level)
    if value is not None:
        return lambda z, value=value: value
    if isinstance(obj, Phrase):
        return lambda z: obj(z.promote(max(z.level, level)))
    return obj


@dataclass(frozen=True)
class BoundaryData:
    """
    Cauchy data y(x) = η(Im x) on the hyperplane Re x = alpha0.

    ``eta`` is a function of the imaginary part; None means zero.
    """

    alpha0: float = 0.0
    eta: Optional[Ingredient] = None

    def foot(self, x: CdNum) -> CdNum:
        """Point of the hyperplane with the same imaginary part as x."""
        return x.imag + self.alpha0

    def eta_at(self, point: CdNum) -> CdNum:
        """η evaluated at Im(point)."""
        return as_function(self.eta, point.level)(point.imag)

    def constant(self, level: int) -> Optional[CdNum]:
        return constant_value(0.0 if self.eta is None else self.eta, level)


@dataclass
class OdeProblem:
    """
    A first-order (or iterated n-th order) equation with its ingredients.

    Ingredients are keyed by the names the equations use: h, f, b, Q, s,
    p, eta, g, G. Scalars hold k, m, n; options hold string switches such as the
    homogeneous side.
    """

    kind: OdeKind
    level: int
    ingredients: Dict[str, Ingredient] = field(default_factory=dict)
    scalars: Dict[str, float] = field(default_factory=dict)
    boundary: BoundaryData = field(default_factory=BoundaryData)
    etas: List[Ingredient] = field(default_factory=list)
    options: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.kind = OdeKind(self.kind)

    def fn(self, name: str, default: float = 0.0) -> Fn:
        return as_function(self.ingredients.get(name), self.level, default)

    def has(self, name: str) -> bool:
        return self.ingredients.get(name) is not None

    def scalar(self, name: str, default: float = 0.0) -> float:
        return float(self.scalars.get(name, default))

    def check_real(self, names: Sequence[str], points: Sequence[CdNum], ctx: Optional[Context] = None) -> None:
        """
        Check that the named ingredients are real at the given points.

        Raises:
            NonRealCoefficient: an ingredient has an imaginary part above tolerance
        """
        check_real(
            {name: self.ingredients.get(name) for name in names if self.has(name)},
            points,
            self.level,
            ctx,
        )


def check_real(
    named: Dict[str, Ingredient],
    points: Sequence[CdNum],
    level: int,
    ctx: Optional[Context] = None,
) -> None:
    ctx = get_context(ctx)
    for name, obj in named.items():
        fn = as_function(obj, level)
        for point in points:
            value = fn(point)
            if not value.is_real(ctx.tolerance * max(1.0, abs(value))):
                raise NonRealCoefficient(f"{name} is not real at {point}: {value}")


def check_points(level: int, alpha0: float = 0.0, count: int = 5, seed: int = 7) -> list[CdNum]:
    """A few points of the half-space Re x > alpha0 for cheap a-priori checks."""
    rng = np.random.default_rng(seed)
    points = []
    for _ in range(count):
        coeffs = rng.uniform(-1.0, 1.0, size=1 << level)
        coeffs[0] = alpha0 + rng.uniform(0.05, 1.0)
        points.append(CdNum(coeffs))
    return points


@dataclass(frozen=True)
class ParametricPair:
    """A curve p ↦ (x(p), y(p))."""

    x: Fn
    y: Fn
    label: str = ""

    def __call__(self, p: CdNum) -> tuple[CdNum, CdNum]:
        return self.x(p), self.y(p)


@dataclass
class Solution:
    """
    A solver result and its verification.

    ``y`` is None only for purely parametric results. ``phrase`` is set
    when the solution is a phrase, so residuals may use its exact
    derivative.
    """

    kind: OdeKind
    representation: Representation
    y: Optional[Fn]
    tolerance: float
    expression: str = "grid-backed"
    phrase: Optional[Phrase] = None
    parametric: Optional[ParametricPair] = None
    branch_notes: List[str] = field(default_factory=list)
    residual: Optional[ResidualReport] = None

    def __call__(self, x: CdNum) -> CdNum:
        if self.y is None:
            raise TypeError("parametric solution has no explicit y(x)")
        return self.y(x)

    @property
    def verified(self) -> bool:
        return self.residual is not None and self.residual.passed

    @classmethod
    def from_phrase(cls, kind: OdeKind, phrase: Phrase, tolerance: float, notes: Optional[List[str]] = None) -> "Solution":
        return cls(
            kind,
            Representation.CLOSED_FORM,
            lambda z: phrase(z.promote(max(z.level, phrase.level))),
            tolerance,
            expression=str(phrase),
            phrase=phrase,
            branch_notes=list(notes or []),
        )


def ingredient_level(level: int, *objs: Optional[Ingredient]) -> int:
    """Highest algebra level among ``level`` and the phrase or number ingredients."""
    for obj in objs:
        if isinstance(obj, (Phrase, CdNum)):
            level = max(level, obj.level)
    return level
