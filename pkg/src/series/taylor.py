"""Truncated multivariate Taylor series with Cayley-Dickson coefficients"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from ..algebra import CdNum, structure_tensor
from ..errors import NonAnalyticInput, ShapeMismatch, ZeroOrNearZero

Scalar = Union[int, float]


@lru_cache(maxsize=32)
def _degree_mask(order: int, nvars: int) -> np.ndarray:
    """Boolean mask of multi-indices with total degree <= order."""
    grids = np.indices((order + 1,) * nvars).sum(axis=0)
    return grids <= order


@lru_cache(maxsize=32)
def _multi_indices(order: int, nvars: int) -> tuple[tuple[int, ...], ...]:
    return tuple(
        idx for idx in itertools.product(range(order + 1), repeat=nvars) if sum(idx) <= order
    )


class TaylorSeries:
    """
    Σ c_α t^{α_0} x_1^{α_1} ... truncated at total degree ``order``.

    Variable 0 is the evolution variable t, the others are real spatial
    coordinates. ``coeffs`` has shape (order+1,)*nvars + (2^level,).
    """

    __slots__ = ("coeffs", "level", "order", "nvars")

    def __init__(self, coeffs: np.ndarray, level: int, order: int):
        nvars = coeffs.ndim - 1
        if coeffs.shape != (order + 1,) * nvars + (1 << level,):
            raise ShapeMismatch(f"coefficient tensor shape {coeffs.shape} does not fit order {order}, level {level}")
        self.coeffs = coeffs
        self.level = level
        self.order = order
        self.nvars = nvars

    # constructors

    @classmethod
    def zeros(cls, level: int, order: int, nvars: int) -> "TaylorSeries":
        return cls(np.zeros((order + 1,) * nvars + (1 << level,)), level, order)

    @classmethod
    def constant(cls, value: Union[CdNum, Scalar], level: int, order: int, nvars: int) -> "TaylorSeries":
        out = cls.zeros(level, order, nvars)
        value = CdNum.coerce(value, level)
        out.coeffs[(0,) * nvars] = value.promote(level).coeffs
        return out

    @classmethod
    def variable(cls, index: int, level: int, order: int, nvars: int, at: float = 0.0) -> "TaylorSeries":
        """The real coordinate ``index`` expanded around ``at``."""
        out = cls.constant(at, level, order, nvars)
        if order >= 1:
            idx = [0] * nvars
            idx[index] = 1
            out.coeffs[tuple(idx)][0] = 1.0
        return out

    def _like(self, coeffs: np.ndarray) -> "TaylorSeries":
        return TaylorSeries(coeffs, self.level, self.order)

    def _check(self, other: "TaylorSeries") -> None:
        if (other.level, other.order, other.nvars) != (self.level, self.order, self.nvars):
            raise ShapeMismatch(
                f"series mismatch: (level, order, nvars) {(self.level, self.order, self.nvars)} "
                f"vs {(other.level, other.order, other.nvars)}"
            )

    def _lift(self, other) -> "TaylorSeries":
        if isinstance(other, TaylorSeries):
            self._check(other)
            return other
        if isinstance(other, CdNum):
            if other.level > self.level:
                raise ShapeMismatch(f"constant of level {other.level} exceeds series level {self.level}")
            return TaylorSeries.constant(other, self.level, self.order, self.nvars)
        if isinstance(other, (int, float)):
            return TaylorSeries.constant(float(other), self.level, self.order, self.nvars)
        raise NonAnalyticInput(f"cannot combine a Taylor series with {type(other).__name__}")

    # arithmetic

    def __add__(self, other) -> "TaylorSeries":
        return self._like(self.coeffs + self._lift(other).coeffs)

    __radd__ = __add__

    def __neg__(self) -> "TaylorSeries":
        return self._like(-self.coeffs)

    def __sub__(self, other) -> "TaylorSeries":
        return self._like(self.coeffs - self._lift(other).coeffs)

    def __rsub__(self, other) -> "TaylorSeries":
        return self._like(self._lift(other).coeffs - self.coeffs)

    def __mul__(self, other) -> "TaylorSeries":
        if isinstance(other, (int, float)):
            return self._like(self.coeffs * float(other))
        if isinstance(other, CdNum):
            return self._like(_mul_const_right(self.coeffs, other.promote(self.level).coeffs, self.level))
        return _cauchy_product(self, self._lift(other))

    def __rmul__(self, other) -> "TaylorSeries":
        if isinstance(other, (int, float)):
            return self._like(self.coeffs * float(other))
        if isinstance(other, CdNum):
            return self._like(_mul_const_left(other.promote(self.level).coeffs, self.coeffs, self.level))
        return _cauchy_product(self._lift(other), self)

    def conj(self) -> "TaylorSeries":
        out = -self.coeffs
        out[..., 0] = self.coeffs[..., 0]
        return self._like(out)

    def inverse(self) -> "TaylorSeries":
        """Series v with u·v = 1, from the expansion Σ (−u₀⁻¹w)^n u₀⁻¹."""
        head = CdNum(self.coeffs[(0,) * self.nvars].copy())
        norm2 = float(np.dot(head.coeffs, head.coeffs))
        if norm2 == 0.0:
            raise ZeroOrNearZero("series with zero constant term is not invertible")
        head_inv = head.conj() * (1.0 / norm2)
        rest = self - head
        ratio = head_inv * rest
        term = TaylorSeries.constant(head_inv, self.level, self.order, self.nvars)
        total = term
        power = TaylorSeries.constant(1.0, self.level, self.order, self.nvars)
        for _ in range(self.order):
            power = power * (-ratio)
            total = total + power * head_inv
        return total

    # calculus

    def partial(self, index: int) -> "TaylorSeries":
        """∂/∂(variable index), truncated at the same order."""
        out = np.zeros_like(self.coeffs)
        src = [slice(None)] * (self.nvars + 1)
        dst = [slice(None)] * (self.nvars + 1)
        src[index] = slice(1, None)
        dst[index] = slice(0, self.order)
        factors = np.arange(1, self.order + 1, dtype=float)
        shape = [1] * (self.nvars + 1)
        shape[index] = self.order
        out[tuple(dst)] = self.coeffs[tuple(src)] * factors.reshape(shape)
        return self._like(out)

    def slice_norm(self, k: int) -> float:
        return float(np.linalg.norm(self.coeffs[k]))

    def evaluate(self, point: Sequence[float], center: Sequence[float] | None = None) -> CdNum:
        center = center if center is not None else [0.0] * self.nvars
        offsets = [float(p) - float(c) for p, c in zip(point, center)]
        powers = [np.array([o ** k for k in range(self.order + 1)]) for o in offsets]
        total = np.zeros(1 << self.level)
        for idx in _multi_indices(self.order, self.nvars):
            weight = math.prod(powers[v][i] for v, i in enumerate(idx))
            if weight != 0.0:
                total += self.coeffs[idx] * weight
        return CdNum(total)

    def restrict_t(self, k: int) -> np.ndarray:
        """Coefficients of t^k as a tensor over the spatial indices."""
        return self.coeffs[k]

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coeffs)))

    def __repr__(self) -> str:
        return f"TaylorSeries(level={self.level}, order={self.order}, nvars={self.nvars})"


def _mul_const_left(a: np.ndarray, coeffs: np.ndarray, level: int) -> np.ndarray:
    return np.einsum("j,...k,jkm->...m", a, coeffs, structure_tensor(level))


def _mul_const_right(coeffs: np.ndarray, b: np.ndarray, level: int) -> np.ndarray:
    return np.einsum("...j,k,jkm->...m", coeffs, b, structure_tensor(level))


def _cauchy_product(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    order, nvars = a.order, a.nvars
    out = np.zeros_like(a.coeffs)
    tensor = structure_tensor(a.level)
    for idx in _multi_indices(order, nvars):
        left = a.coeffs[idx]
        if not np.any(left):
            continue
        product = np.einsum("j,...k,jkm->...m", left, b.coeffs, tensor)
        dst = tuple(slice(i, None) for i in idx)
        src = tuple(slice(0, order + 1 - i) for i in idx)
        out[dst] += product[src]
    out[~_degree_mask(order, nvars)] = 0.0
    return TaylorSeries(out, a.level, order)
