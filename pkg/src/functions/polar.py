"""Polar form z = |z| exp(M φ) on the bunch of complex planes C_M"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..algebra import CdNum
from ..config import Context, get_context
from ..errors import ZeroInput


@dataclass(frozen=True)
class PolarForm:
    """
    Modulus, canonical axis and angle of a nonzero Cayley-Dickson number.

    The axis lies in S_r^+ (first nonzero coefficient positive). The angle is
    measured against that axis, so it is negative when Im z points into the
    opposite half of the sphere. For real z the axis is i_1 and
    ``axis_ambiguous`` is set.
    """

    modulus: float
    axis: CdNum
    angle: float
    axis_ambiguous: bool

    def plane_coordinates(self) -> complex:
        """Image of the source under C_M → C, M ↦ i."""
        return complex(self.modulus * math.cos(self.angle), self.modulus * math.sin(self.angle))


def canonical_axis(direction: CdNum) -> tuple[CdNum, int]:
    """
    Put a purely imaginary unit into S_r^+.

    Returns:
        (axis, sign) with axis = sign · direction
    """
    coeffs = direction.coeffs[1:]
    scale = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    for c in coeffs:
        if abs(c) > 1e-15 * scale:
            if c < 0:
                return -direction, -1
            return direction, 1
    return direction, 1


def default_axis(level: int) -> CdNum:
    return CdNum.basis(1, max(level, 1))


def polar_decompose(z: CdNum, ctx: Optional[Context] = None) -> PolarForm:
    ctx = get_context(ctx)
    modulus = abs(z)
    if modulus <= ctx.tolerance:
        raise ZeroInput(f"polar form undefined for |z| = {modulus:.3e}")
    imag = z.imag
    imag_norm = abs(imag)
    if imag_norm <= ctx.tolerance:
        angle = 0.0 if z.real > 0 else math.pi
        return PolarForm(modulus, default_axis(z.level), angle, True)
    axis, sign = canonical_axis(imag * (1.0 / imag_norm))
    angle = math.atan2(imag_norm, z.real)
    return PolarForm(modulus, axis, sign * angle, False)


def from_plane(value: complex, axis: CdNum) -> CdNum:
    """Inverse of C_M → C: a + ib ↦ a + bM."""
    return axis * float(value.imag) + float(value.real)


def to_plane(z: CdNum, axis: CdNum) -> complex:
    """Coordinates of z in C_M; z is assumed to lie in that plane."""
    level = max(z.level, axis.level)
    return complex(z.real, float(np.dot(z.imag.promote(level).coeffs, axis.promote(level).coeffs)))
