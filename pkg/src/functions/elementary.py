"""Exponential, logarithm, real powers and square roots of Cayley-Dickson numbers"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Optional

import numpy as np

from ..algebra import CdNum, LinOpR
from ..config import Context, get_context
from ..errors import ZeroBase
from .polar import default_axis, polar_decompose


def cd_exp(z: CdNum) -> CdNum:
    """exp(z) = e^{Re z}(cos|z'| + (z'/|z'|) sin|z'|) with z' = Im z."""
    scale = math.exp(z.real)
    imag = z.imag
    theta = abs(imag)
    if theta == 0.0:
        return CdNum.real_number(scale, z.level)
    return imag * (scale * math.sin(theta) / theta) + scale * math.cos(theta)


class LnResult(NamedTuple):
    value: CdNum
    ambiguous: bool


def cd_ln_principal(z: CdNum, ctx: Optional[Context] = None) -> LnResult:
    """
    Principal logarithm ln|z| + M φ.

    Raises:
        ZeroInput: |z| below tolerance
    """
    polar = polar_decompose(z, ctx)
    value = polar.axis * polar.angle + math.log(polar.modulus)
    return LnResult(value.promote(max(value.level, z.level)), polar.axis_ambiguous)


def cd_ln(z: CdNum, ctx: Optional[Context] = None) -> CdNum:
    return cd_ln_principal(z, ctx).value


def _as_whole(a: float) -> Optional[int]:
    if float(a).is_integer() and a >= 0:
        return int(a)
    return None


def cd_pow_real(z: CdNum, a: float, ctx: Optional[Context] = None) -> CdNum:
    """
    z^a for real a: iterated products for whole a, exp(a Ln z) otherwise.

    Raises:
        ZeroBase: non-whole exponent at z ≈ 0
    """
    ctx = get_context(ctx)
    whole = _as_whole(a)
    if whole is not None:
        return z ** whole
    if abs(z) <= ctx.tolerance:
        raise ZeroBase(f"z^{a} is undefined at |z| = {abs(z):.3e}")
    result = cd_exp(cd_ln(z, ctx) * float(a))
    return result.promote(max(result.level, z.level))


class RootKind(str, Enum):
    """Shapes of a square-root set"""
    POINT_PAIR = "point_pair"
    SPHERE = "sphere"


@dataclass(frozen=True)
class RootSet:
    """
    Solutions w of a quadratic relation.

    A point pair lists its points; a sphere is {center + radius·K : Re K = 0, |K| = 1}.
    """

    kind: RootKind
    level: int
    points: tuple[CdNum, ...] = ()
    center: Optional[CdNum] = None
    radius: float = 0.0

    def sample(self, rng: np.random.Generator, count: int = 1) -> list[CdNum]:
        if self.kind is RootKind.POINT_PAIR:
            return list(self.points)
        dim = 1 << self.level
        samples = []
        for _ in range(count):
            direction = np.zeros(dim)
            direction[1:] = rng.normal(size=dim - 1)
            direction /= np.linalg.norm(direction)
            samples.append(self.center + CdNum(direction) * self.radius)
        return samples

    def shifted(self, offset: CdNum) -> "RootSet":
        if self.kind is RootKind.POINT_PAIR:
            return RootSet(self.kind, self.level, tuple(p + offset for p in self.points))
        return RootSet(self.kind, self.level, center=self.center + offset, radius=self.radius)

    def contains(self, w: CdNum, tol: float = 1e-8) -> bool:
        if self.kind is RootKind.POINT_PAIR:
            return any(abs(w - p) <= tol for p in self.points)
        offset = w - self.center
        return abs(offset.real) <= tol and abs(abs(offset) - self.radius) <= tol


def sqrt_set(z: CdNum, ctx: Optional[Context] = None) -> RootSet:
    """All square roots of z: a point pair, or a sphere when z is negative real."""
    ctx = get_context(ctx)
    level = max(z.level, 1)
    modulus = abs(z)
    if modulus <= ctx.tolerance:
        return RootSet(RootKind.POINT_PAIR, level, (CdNum.zero(level),))
    if z.is_real(ctx.tolerance) and z.real < 0:
        return RootSet(RootKind.SPHERE, level, center=CdNum.zero(level), radius=math.sqrt(modulus))
    polar = polar_decompose(z, ctx)
    root = (cd_exp(polar.axis * (polar.angle / 2.0)) * math.sqrt(modulus)).promote(level)
    return RootSet(RootKind.POINT_PAIR, level, (root, -root))


@dataclass(frozen=True)
class RealAnalytic:
    """
    Scalar analytic function with real Taylor coefficients, lifted to A_r.

    On each plane C_M the lift agrees with the complex function under
    a + bM ↔ a + ib. Its derivative acts as multiplication by f'(z) along
    C_M and by Im f(a+ib)/b across it.
    """

    name: str
    fn: Callable[[complex], complex]
    deriv: Callable[[complex], complex]
    real_domain: Callable[[float], bool] = field(default=lambda x: True)

    def _plane(self, z: CdNum) -> tuple[complex, CdNum, float]:
        imag = z.imag
        b = abs(imag)
        axis = imag * (1.0 / b) if b > 0.0 else default_axis(z.level)
        return complex(z.real, b), axis, b

    def __call__(self, z: CdNum) -> CdNum:
        w, axis, b = self._plane(z)
        if b == 0.0 and self.real_domain(z.real):
            return CdNum.real_number(complex(self.fn(complex(z.real, 0.0))).real, z.level)
        value = complex(self.fn(w))
        return (axis * value.imag + value.real).promote(max(z.level, axis.level))

    def apply_derivative(self, z: CdNum, h: CdNum) -> CdNum:
        level = max(z.level, h.level)
        z, h = z.promote(level), h.promote(level)
        w, axis, b = self._plane(z)
        if b == 0.0:
            return h * complex(self.deriv(w)).real
        axis = axis.promote(level)
        along = float(np.dot(h.coeffs, axis.coeffs))
        parallel = axis * along + h.real
        across = h - parallel
        slope = complex(self.deriv(w)) * complex(h.real, along)
        ratio = complex(self.fn(w)).imag / b
        return axis * slope.imag + slope.real + across * ratio

    def derivative(self, z: CdNum) -> LinOpR:
        return LinOpR.from_function(z.level, lambda h: self.apply_derivative(z, h))


EXP = RealAnalytic("exp", cmath.exp, cmath.exp)
SIN = RealAnalytic("sin", cmath.sin, cmath.cos)
COS = RealAnalytic("cos", cmath.cos, lambda w: -cmath.sin(w))
SINH = RealAnalytic("sinh", cmath.sinh, cmath.cosh)
COSH = RealAnalytic("cosh", cmath.cosh, cmath.sinh)
LOG = RealAnalytic("log", cmath.log, lambda w: 1.0 / w, real_domain=lambda x: x > 0)

REAL_ANALYTIC = {f.name: f for f in (EXP, SIN, COS, SINH, COSH, LOG)}
