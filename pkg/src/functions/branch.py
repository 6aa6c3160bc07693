"""Analytic continuation of the logarithm along paths"""

from __future__ import annotations

import logging
import math
from typing import Optional

import numpy as np

from ..algebra import CdNum, Path, cd_inv
from ..config import Context, get_context
from ..errors import PathThroughZero, StepTooCoarse
from .elementary import cd_exp
from .polar import default_axis

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
SAMPLES_PER_SEGMENT = 16


def nearest_log(w: CdNum, previous: CdNum, ctx: Optional[Context] = None) -> CdNum:
    """
    The logarithm of w closest to ``previous``.

    Every logarithm of a non-real w is ln|w| + M(θ + 2πk) on the plane of w;
    for real w the axis is free and is taken along Im(previous).
    """
    ctx = get_context(ctx)
    level = max(w.level, previous.level, 1)
    w, previous = w.promote(level), previous.promote(level)
    log_mod = math.log(abs(w))
    imag = w.imag
    imag_norm = abs(imag)
    prev_imag = previous.imag
    if imag_norm > ctx.tolerance:
        axis = imag * (1.0 / imag_norm)
        theta = math.atan2(imag_norm, w.real)
        along = float(np.dot(prev_imag.coeffs, axis.coeffs))
        angle = theta + TWO_PI * round((along - theta) / TWO_PI)
        return axis * angle + log_mod
    base = 0.0 if w.real > 0 else math.pi
    prev_norm = abs(prev_imag)
    axis = prev_imag * (1.0 / prev_norm) if prev_norm > 0.0 else default_axis(level)
    angle = base + TWO_PI * round((prev_norm - base) / TWO_PI)
    return axis * angle + log_mod


def _segment_clearance(a: CdNum, b: CdNum) -> float:
    """Distance from the origin to the segment [a, b]."""
    d = b - a
    denom = float(np.dot(d.coeffs, d.coeffs))
    t = 0.0 if denom == 0.0 else float(np.clip(-np.dot(a.coeffs, d.coeffs) / denom, 0.0, 1.0))
    return abs(a + d * t)


def continue_ln_along_path(
    path: Path,
    start_branch: CdNum,
    ctx: Optional[Context] = None,
) -> CdNum:
    """
    Continue a logarithm of γ(0) along the path to a logarithm of γ(1).

    Args:
        path: Polyline avoiding the origin
        start_branch: A logarithm of the first node
        ctx: Numerical context

    Returns:
        The continued logarithm at the last node

    Raises:
        PathThroughZero: the path passes within tolerance of 0
        StepTooCoarse: a jump above the guard persists after max refinement depth
    """
    ctx = get_context(ctx)
    level = max(path.level, start_branch.level, 1)
    start = path.start.promote(level)
    if abs(cd_exp(start_branch) - start) > 1e-6 * max(1.0, abs(start)):
        raise ValueError(f"start branch {start_branch} is not a logarithm of {start}")
    current = start_branch.promote(level)
    for a, b in path.segments():
        a, b = a.promote(level), b.promote(level)
        clearance = _segment_clearance(a, b)
        if clearance <= ctx.tolerance:
            raise PathThroughZero(f"segment {a} → {b} passes within {clearance:.3e} of 0")
        previous_point = a
        for i in range(1, SAMPLES_PER_SEGMENT + 1):
            point = a + (b - a) * (i / SAMPLES_PER_SEGMENT)
            current = _advance(previous_point, point, current, 0, ctx)
            previous_point = point
    return current


def ln_branch_derivative(z: CdNum, h: CdNum, branch: CdNum) -> CdNum:
    """
    Derivative at z, applied to h, of the logarithm branch through ``branch``.

    Along C_M it is z^{-1}h; across C_M it is multiplication by
    |Im L| / (|z| sin|Im L|), which depends on the branch L.
    """
    level = max(z.level, h.level, branch.level, 1)
    z, h = z.promote(level), h.promote(level)
    imag = z.imag
    b = abs(imag)
    if b == 0.0:
        return h * (1.0 / z.real)
    axis = imag * (1.0 / b)
    along = float(np.dot(h.coeffs, axis.coeffs))
    parallel = axis * along + h.real
    across = h - parallel
    turn = abs(branch.imag)
    ratio = turn / (abs(z) * math.sin(turn)) if turn > 1e-12 else 1.0 / abs(z)
    return cd_inv(z) * parallel + across * ratio


def _advance(p0: CdNum, p1: CdNum, value: CdNum, depth: int, ctx: Context) -> CdNum:
    candidate = nearest_log(p1, value, ctx)
    if abs(candidate - value) <= ctx.branch_jump:
        return candidate
    if depth >= ctx.branch_max_depth:
        raise StepTooCoarse(
            f"logarithm jumps by {abs(candidate - value):.3f} between {p0} and {p1} after {depth} refinements"
        )
    logger.debug("refining branch step at depth %d", depth + 1)
    mid = (p0 + p1) * 0.5
    value = _advance(p0, mid, value, depth + 1, ctx)
    return _advance(mid, p1, value, depth + 1, ctx)
