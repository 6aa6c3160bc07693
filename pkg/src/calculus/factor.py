"""Integrating factors μ(x) or μ(y) for quaternion 1-forms"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from ..algebra import CdNum, cd_inv
from ..config import Context, get_context
from ..errors import CompatibilityFailed, NotQuaternion
from ..functions import cd_exp
from ..models import ExactnessReport
from .forms import Form1, check_exact
from .quadrature import integrate_interval

logger = logging.getLogger(__name__)

QUATERNION_LEVEL = 2
COMPATIBILITY_TOL = 1e-4


class Dependence(str, Enum):
    """Variable the integrating factor depends on"""
    X_ONLY = "x_only"
    Y_ONLY = "y_only"


Integrand = Callable[[CdNum, int], CdNum]


def _step(ctx: Context, *points: CdNum) -> float:
    return ctx.fd_step * max([1.0] + [abs(p) for p in points])


def x_integrand(form: Form1, x: CdNum, y: CdNum, j: int, k: int = 0, ctx: Optional[Context] = None) -> CdNum:
    """R_j = ([∂(A.i_j)/∂y].v − [∂(B.v)/∂x].i_j)(B.v)^{-1} with v = i_k."""
    ctx = get_context(ctx)
    level = form.level
    eps = _step(ctx, x, y)
    v = CdNum.basis(k, level)
    ij = CdNum.basis(j, level)
    dAy = (form.A(x, y + v * eps).apply(ij) - form.A(x, y - v * eps).apply(ij)) * (0.5 / eps)
    dBx = (form.B(x + ij * eps, y).apply(v) - form.B(x - ij * eps, y).apply(v)) * (0.5 / eps)
    return (dAy - dBx) * cd_inv(form.B(x, y).apply(v))


def y_integrand(form: Form1, x: CdNum, y: CdNum, k: int, j: int = 0, ctx: Optional[Context] = None) -> CdNum:
    """S_k = ([∂(B.i_k)/∂x].h − [∂(A.h)/∂y].i_k)(A.h)^{-1} with h = i_j."""
    ctx = get_context(ctx)
    level = form.level
    eps = _step(ctx, x, y)
    h = CdNum.basis(j, level)
    ik = CdNum.basis(k, level)
    dBx = (form.B(x + h * eps, y).apply(ik) - form.B(x - h * eps, y).apply(ik)) * (0.5 / eps)
    dAy = (form.A(x, y + ik * eps).apply(h) - form.A(x, y - ik * eps).apply(h)) * (0.5 / eps)
    return (dBx - dAy) * cd_inv(form.A(x, y).apply(h))


def factor_from_integrand(
    integrand: Integrand,
    marked: CdNum,
    point: CdNum,
    ctx: Optional[Context] = None,
) -> CdNum:
    """
    Solve ∂μ/∂x_j = μ·R_j(x) along axis-parallel segments from ``marked``.

    Args:
        integrand: (x, j) ↦ R_j(x)
        marked: Start point, where μ = 1
        point: End point
        ctx: Numerical context

    Returns:
        μ(point) = Π_j exp(∫ R_j dx_j)
    """
    ctx = get_context(ctx)
    level = max(marked.level, point.level)
    current = marked.promote(level).coeffs.copy()
    target = point.promote(level).coeffs
    mu = CdNum.one(level)
    for j in range(1 << level):
        span = float(target[j] - current[j])
        if span == 0.0:
            continue
        start = current.copy()

        def along(t: float, start=start, j=j, span=span) -> CdNum:
            coords = start.copy()
            coords[j] += span * t
            return integrand(CdNum(coords), j) * span

        mu = mu * cd_exp(integrate_interval(along, 0.0, 1.0, ctx))
        current[j] = target[j]
    return mu


@dataclass
class IntegratingFactor:
    """μ with its verification"""
    mu: Callable[[CdNum, CdNum], CdNum]
    dependence: Dependence
    marked: CdNum
    verification: ExactnessReport
    consistent: bool = True
    notes: list[str] = field(default_factory=list)

    def __call__(self, x: CdNum, y: CdNum) -> CdNum:
        return self.mu(x, y)


def _check_compatibility(
    form: Form1,
    integrand: Callable[[CdNum, CdNum, int], CdNum],
    dependence: Dependence,
    rng: np.random.Generator,
    samples: int,
    ctx: Context,
) -> None:
    dim = 1 << form.level
    for _ in range(samples):
        x1, y1 = form.sample(rng)
        x2, y2 = form.sample(rng)
        if dependence is Dependence.X_ONLY:
            pairs = [(x1, y1, x1, y2)]
        else:
            pairs = [(x1, y1, x2, y1)]
        for xa, ya, xb, yb in pairs:
            for j in range(dim):
                ra, rb = integrand(xa, ya, j), integrand(xb, yb, j)
                if abs(ra - rb) > COMPATIBILITY_TOL * max(1.0, abs(ra)):
                    other = "y" if dependence is Dependence.X_ONLY else "x"
                    raise CompatibilityFailed(
                        f"integrand component {j} varies with {other}: {ra} vs {rb}"
                    )


def integrating_factor(
    form: Form1,
    dependence: Union[Dependence, str] = Dependence.X_ONLY,
    k: int = 0,
    marked: Optional[CdNum] = None,
    samples: int = 3,
    seed: int = 0,
    ctx: Optional[Context] = None,
) -> IntegratingFactor:
    """
    Integrating factor depending on one variable of a quaternion 1-form.

    Args:
        form: A quaternion form A.dx + B.dy
        dependence: x_only or y_only
        k: Index of the fixed direction v = i_k (h = i_k for y_only)
        marked: Point where μ = 1; defaults to the domain center
        samples: Points used for the compatibility and exactness checks
        seed: Seed of the sample points
        ctx: Numerical context

    Returns:
        IntegratingFactor whose ``verification`` is the exactness test of (μA, μB)

    Raises:
        NotQuaternion: the form is not over quaternions
        CompatibilityFailed: the integrand depends on the other variable
    """
    ctx = get_context(ctx)
    dependence = Dependence(dependence)
    if form.level != QUATERNION_LEVEL:
        raise NotQuaternion(f"integrating factors need level {QUATERNION_LEVEL}, got {form.level}")
    rng = np.random.default_rng(seed)

    def integrand_for(index: int) -> Callable[[CdNum, CdNum, int], CdNum]:
        if dependence is Dependence.X_ONLY:
            return lambda x, y, j: x_integrand(form, x, y, j, index, ctx)
        return lambda x, y, j: y_integrand(form, x, y, j, index, ctx)

    integrand = integrand_for(k)
    _check_compatibility(form, integrand, dependence, rng, samples, ctx)

    if dependence is Dependence.X_ONLY:
        anchor = form.y0
        marked = marked if marked is not None else form.x0

        def mu(x: CdNum, y: CdNum) -> CdNum:
            return factor_from_integrand(lambda p, j: integrand(p, anchor, j), marked, x, ctx)
    else:
        anchor = form.x0
        marked = marked if marked is not None else form.y0

        def mu(x: CdNum, y: CdNum) -> CdNum:
            return factor_from_integrand(lambda p, j: integrand(anchor, p, j), marked, y, ctx)

    notes = []
    consistent = True
    other = integrand_for((k + 1) % (1 << form.level))
    sample_x, sample_y = form.sample(rng)
    if dependence is Dependence.X_ONLY:
        mu_other = factor_from_integrand(lambda p, j: other(p, anchor, j), marked, sample_x, ctx)
    else:
        mu_other = factor_from_integrand(lambda p, j: other(anchor, p, j), marked, sample_y, ctx)
    mu_here = mu(sample_x, sample_y)
    if abs(mu_here - mu_other) > COMPATIBILITY_TOL * max(1.0, abs(mu_here)):
        consistent = False
        notes.append(f"direction i_{k} and i_{(k + 1) % 4} give different factors: {mu_here} vs {mu_other}")
        logger.warning("inconsistent integrating factor across directions: %s", notes[-1])

    verification = check_exact(form.scaled(mu), samples=max(1, samples - 1), seed=seed + 1, ctx=ctx)
    if not verification.exact:
        logger.warning("scaled form is not exact (defect %.3e)", verification.max_defect)
    return IntegratingFactor(mu, dependence, marked, verification, consistent, notes)
