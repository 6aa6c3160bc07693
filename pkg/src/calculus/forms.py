"""Differential 1-forms A(x, y).dx + B(x, y).dy: exactness and potentials"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..algebra import CdNum, LinOpR, Path
from ..config import Context, get_context
from ..errors import NotExact
from ..models import ExactnessReport
from .integral import integrate_form

logger = logging.getLogger(__name__)

OperatorField = Callable[[CdNum, CdNum], LinOpR]

EXACT_RTOL = 1e-5


@dataclass(frozen=True)
class Form1:
    """
    w = A(x, y).dx + B(x, y).dy on the product of two balls.

    ``A`` and ``B`` map a point (x, y) to the real-linear operators acting on
    dx and dy.
    """

    A: OperatorField
    B: OperatorField
    level: int
    center_x: Optional[CdNum] = None
    center_y: Optional[CdNum] = None
    radius: float = 0.5

    @property
    def x0(self) -> CdNum:
        return self.center_x if self.center_x is not None else CdNum.zero(self.level)

    @property
    def y0(self) -> CdNum:
        return self.center_y if self.center_y is not None else CdNum.zero(self.level)

    def scaled(self, mu: Callable[[CdNum, CdNum], CdNum]) -> "Form1":
        """The form (μA, μB) with μ multiplied on the left."""
        return Form1(
            lambda x, y: LinOpR.left_mul(mu(x, y).promote(self.level)) @ self.A(x, y),
            lambda x, y: LinOpR.left_mul(mu(x, y).promote(self.level)) @ self.B(x, y),
            self.level,
            self.center_x,
            self.center_y,
            self.radius,
        )

    def sample(self, rng: np.random.Generator) -> tuple[CdNum, CdNum]:
        dim = 1 << self.level
        points = []
        for center in (self.x0, self.y0):
            direction = rng.normal(size=dim)
            direction /= np.linalg.norm(direction)
            points.append(center + CdNum(direction * self.radius * rng.uniform(0.0, 0.9)))
        return points[0], points[1]


def _partial(field: OperatorField, x: CdNum, y: CdNum, step: float, along_x: bool, index: int) -> np.ndarray:
    """Central difference of the operator matrix in coordinate ``index`` of x or y."""
    e = CdNum.basis(index, x.level) * step
    if along_x:
        plus, minus = field(x + e, y), field(x - e, y)
    else:
        plus, minus = field(x, y + e), field(x, y - e)
    return (plus.matrix - minus.matrix) / (2.0 * step)


def exactness_defect(form: Form1, x: CdNum, y: CdNum, ctx: Optional[Context] = None) -> tuple[float, float]:
    """
    Largest violation of [∂(A.h)/∂y].v = [∂(B.v)/∂x].h over basis pairs.

    Returns:
        (defect, scale) with scale = max(1, |A|, |B|)
    """
    ctx = get_context(ctx)
    level = form.level
    x, y = x.promote(level), y.promote(level)
    step = ctx.fd_step * max(1.0, abs(x), abs(y))
    dim = 1 << level
    dA = [_partial(form.A, x, y, step, False, k) for k in range(dim)]  # dA[k][:, j] = ∂(A.i_j)/∂y.i_k
    dB = [_partial(form.B, x, y, step, True, j) for j in range(dim)]  # dB[j][:, k] = ∂(B.i_k)/∂x.i_j
    defect = 0.0
    for j in range(dim):
        for k in range(dim):
            defect = max(defect, float(np.linalg.norm(dA[k][:, j] - dB[j][:, k])))
    scale = max(1.0, form.A(x, y).norm(), form.B(x, y).norm())
    return defect, scale


def component_coefficients(form: Form1, x: CdNum, y: CdNum) -> tuple[np.ndarray, np.ndarray]:
    """Real coefficient functions a[j, k], b[j, k] with A.i_k = Σ_j i_j a[j, k]."""
    return form.A(x, y).matrix.copy(), form.B(x, y).matrix.copy()


def component_defect(form: Form1, x: CdNum, y: CdNum, ctx: Optional[Context] = None) -> float:
    """max |∂a[j,k]/∂y_l − ∂b[j,l]/∂x_k| from the coefficient functions."""
    ctx = get_context(ctx)
    level = form.level
    x, y = x.promote(level), y.promote(level)
    step = ctx.fd_step * max(1.0, abs(x), abs(y))
    dim = 1 << level
    worst = 0.0
    for l in range(dim):
        e = CdNum.basis(l, level) * step
        da = (component_coefficients(form, x, y + e)[0] - component_coefficients(form, x, y - e)[0]) / (2 * step)
        for k in range(dim):
            f = CdNum.basis(k, level) * step
            db = (component_coefficients(form, x + f, y)[1] - component_coefficients(form, x - f, y)[1]) / (2 * step)
            worst = max(worst, float(np.max(np.abs(da[:, k] - db[:, l]))))
    return worst


def check_exact(
    form: Form1,
    samples: int = 5,
    seed: int = 0,
    componentwise: bool = False,
    ctx: Optional[Context] = None,
) -> ExactnessReport:
    """
    Test closedness of a 1-form at random points of its domain.

    Args:
        form: The 1-form
        samples: Number of random (x, y) points
        seed: Seed of the point generator
        componentwise: Also run the test on the real coefficient functions
        ctx: Numerical context

    Returns:
        ExactnessReport; ``exact`` iff max defect < 1e-5·scale
    """
    ctx = get_context(ctx)
    rng = np.random.default_rng(seed)
    worst = 0.0
    scale = 1.0
    worst_component = 0.0 if componentwise else None
    failures = []
    for _ in range(samples):
        x, y = form.sample(rng)
        try:
            defect, point_scale = exactness_defect(form, x, y, ctx)
        except (ArithmeticError, ValueError) as e:
            failures.append(f"({x}, {y}): {e}")
            continue
        worst = max(worst, defect)
        scale = max(scale, point_scale)
        if componentwise:
            worst_component = max(worst_component, component_defect(form, x, y, ctx))
    exact = not failures and worst < EXACT_RTOL * scale
    logger.debug("exactness defect %.3e (scale %.3e) over %d samples", worst, scale, samples)
    return ExactnessReport(
        exact=exact,
        max_defect=worst,
        scale=scale,
        samples=samples,
        component_defect=worst_component,
        failures=failures,
    )


class Potential:
    """F(x, y) = ∫_α^x A(t, y).dt + ∫_β^y B(α, τ).dτ along straight segments."""

    def __init__(self, form: Form1, alpha: CdNum, beta: CdNum, ctx: Optional[Context] = None):
        self.form = form
        self.alpha = alpha.promote(form.level)
        self.beta = beta.promote(form.level)
        self.ctx = get_context(ctx)

    def __call__(self, x: CdNum, y: CdNum) -> CdNum:
        level = self.form.level
        x, y = x.promote(level), y.promote(level)
        total = CdNum.zero(level)
        if abs(x - self.alpha) > 0.0:
            total = total + integrate_form(lambda t: self.form.A(t, y), Path.straight(self.alpha, x), self.ctx)
        if abs(y - self.beta) > 0.0:
            total = total + integrate_form(lambda s: self.form.B(self.alpha, s), Path.straight(self.beta, y), self.ctx)
        return total


def reconstruct_potential(
    form: Form1,
    alpha: Optional[CdNum] = None,
    beta: Optional[CdNum] = None,
    verify: bool = True,
    ctx: Optional[Context] = None,
) -> Potential:
    """
    Potential F with dF = w.

    Raises:
        NotExact: the exactness test fails
    """
    if verify:
        report = check_exact(form, ctx=ctx)
        if not report.exact:
            raise NotExact(f"form is not exact: defect {report.max_defect:.3e} at scale {report.scale:.3e}")
    alpha = alpha if alpha is not None else form.x0
    beta = beta if beta is not None else form.y0
    return Potential(form, alpha, beta, ctx)
