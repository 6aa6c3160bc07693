"""Cayley-Dickson numbers and their arithmetic"""

from __future__ import annotations

import math
from numbers import Real
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ..config import Context, get_context
from ..errors import LevelMismatch, NonFiniteValue, ZeroOrNearZero
from .table import MAX_LEVEL, structure_tensor

Scalar = Union[int, float, np.floating, np.integer]


def _level_of(size: int) -> int:
    level = size.bit_length() - 1
    if size < 1 or (1 << level) != size or level > MAX_LEVEL:
        raise LevelMismatch(f"coefficient count must be 2^r with r <= {MAX_LEVEL}, got {size}")
    return level


def _is_scalar(value: object) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool)


class CdNum:
    """
    Immutable element of the Cayley-Dickson algebra A_r, r in [0, 4].

    ``coeffs[k]`` is the coefficient of the basis unit i_k (i_0 = 1).
    Operators promote mixed levels by zero-padding; :func:`cd_mul` is the
    strict same-level product.
    """

    __slots__ = ("_coeffs", "_level")

    def __init__(self, coeffs: Union[Sequence[float], np.ndarray], level: Optional[int] = None):
        arr = np.array(coeffs, dtype=float).reshape(-1)
        if level is not None:
            size = 1 << level
            if arr.size > size:
                raise LevelMismatch(f"{arr.size} coefficients do not fit level {level}")
            if arr.size < size:
                arr = np.concatenate([arr, np.zeros(size - arr.size)])
        self._level = _level_of(arr.size)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteValue(f"non-finite coefficient in {arr.tolist()}")
        arr.setflags(write=False)
        self._coeffs = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray, level: int) -> "CdNum":
        if not np.all(np.isfinite(arr)):
            raise NonFiniteValue(f"non-finite coefficient in {arr.tolist()}")
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj._coeffs = arr
        obj._level = level
        return obj

    # constructors

    @classmethod
    def zero(cls, level: int) -> "CdNum":
        return cls(np.zeros(1 << level))

    @classmethod
    def one(cls, level: int) -> "CdNum":
        return cls.real_number(1.0, level)

    @classmethod
    def real_number(cls, value: float, level: int) -> "CdNum":
        arr = np.zeros(1 << level)
        arr[0] = float(value)
        return cls(arr)

    @classmethod
    def basis(cls, index: int, level: int) -> "CdNum":
        dim = 1 << level
        if not 0 <= index < dim:
            raise ValueError(f"basis index {index} outside [0, {dim - 1}]")
        arr = np.zeros(dim)
        arr[index] = 1.0
        return cls(arr)

    @classmethod
    def coerce(cls, value: Union["CdNum", Scalar], level: int) -> "CdNum":
        """Real scalars become real numbers at ``level``; CdNums are promoted."""
        if isinstance(value, CdNum):
            return value.promote(max(level, value.level))
        if _is_scalar(value):
            return cls.real_number(float(value), level)
        raise TypeError(f"cannot interpret {value!r} as a Cayley-Dickson number")

    # accessors

    @property
    def level(self) -> int:
        return self._level

    @property
    def dim(self) -> int:
        return self._coeffs.size

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def real(self) -> float:
        return float(self._coeffs[0])

    @property
    def imag(self) -> "CdNum":
        arr = self._coeffs.copy()
        arr[0] = 0.0
        return CdNum._wrap(arr, self._level)

    def is_real(self, tol: float = 0.0) -> bool:
        return float(np.linalg.norm(self._coeffs[1:])) <= tol

    def promote(self, level: int) -> "CdNum":
        if level == self._level:
            return self
        if level < self._level:
            raise LevelMismatch(f"cannot demote level {self._level} to {level}")
        arr = np.zeros(1 << level)
        arr[: self.dim] = self._coeffs
        return CdNum._wrap(arr, level)

    # arithmetic

    def _align(self, other: "CdNum") -> tuple[np.ndarray, np.ndarray, int]:
        level = max(self._level, other._level)
        return self.promote(level)._coeffs, other.promote(level)._coeffs, level

    def __add__(self, other):
        if isinstance(other, CdNum):
            a, b, level = self._align(other)
            return CdNum._wrap(a + b, level)
        if _is_scalar(other):
            arr = self._coeffs.copy()
            arr[0] += float(other)
            return CdNum._wrap(arr, self._level)
        return NotImplemented

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "CdNum":
        return CdNum._wrap(-self._coeffs, self._level)

    def __sub__(self, other):
        if isinstance(other, CdNum) or _is_scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if _is_scalar(other):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, CdNum):
            a, b, level = self._align(other)
            return CdNum._wrap(_mul_arrays(a, b, level), level)
        if _is_scalar(other):
            return CdNum._wrap(self._coeffs * float(other), self._level)
        return NotImplemented

    def __rmul__(self, other):
        if _is_scalar(other):
            return CdNum._wrap(self._coeffs * float(other), self._level)
        return NotImplemented

    def __truediv__(self, other):
        if _is_scalar(other):
            if other == 0:
                raise ZeroOrNearZero("division by real zero")
            return CdNum._wrap(self._coeffs / float(other), self._level)
        if isinstance(other, CdNum):
            return self * cd_inv(other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return float(other) * cd_inv(self)
        return NotImplemented

    def __pow__(self, n: int) -> "CdNum":
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        base = self if n >= 0 else cd_inv(self)
        result = CdNum.one(self._level)
        for _ in range(abs(n)):
            result = result * base
        return result

    def __abs__(self) -> float:
        return float(np.linalg.norm(self._coeffs))

    def conj(self) -> "CdNum":
        return cd_conj(self)

    # comparison and display

    def __eq__(self, other) -> bool:
        if isinstance(other, CdNum):
            a, b, _ = self._align(other)
            return bool(np.array_equal(a, b))
        if _is_scalar(other):
            return self.is_real() and self.real == float(other)
        return NotImplemented

    def __hash__(self) -> int:
        trimmed = np.trim_zeros(self._coeffs, "b")
        return hash(tuple(trimmed.tolist()))

    def isclose(self, other: Union["CdNum", Scalar], tol: float = 1e-9) -> bool:
        other = CdNum.coerce(other, self._level)
        return abs(self - other) <= tol

    def __repr__(self) -> str:
        return f"CdNum({format_cdnum(self)}, level={self._level})"

    def __str__(self) -> str:
        return format_cdnum(self)


def _mul_arrays(a: np.ndarray, b: np.ndarray, level: int) -> np.ndarray:
    return b @ np.tensordot(a, structure_tensor(level), axes=(0, 0))


def mul_batch(a: np.ndarray, b: np.ndarray, level: int) -> np.ndarray:
    """Row-wise products of coefficient arrays shaped (..., 2^level)."""
    return np.einsum("...j,...k,jkm->...m", a, b, structure_tensor(level), optimize=True)


def cd_mul(a: CdNum, b: CdNum) -> CdNum:
    """Same-level product by bilinear expansion over the basis table."""
    if a.level != b.level:
        raise LevelMismatch(f"cd_mul needs equal levels, got {a.level} and {b.level}")
    return CdNum._wrap(_mul_arrays(a.coeffs, b.coeffs, a.level), a.level)


def cd_conj(a: CdNum) -> CdNum:
    arr = -a.coeffs
    arr[0] = a.coeffs[0]
    return CdNum._wrap(arr, a.level)


def cd_inv_verified(a: CdNum, ctx: Optional[Context] = None) -> tuple[CdNum, bool]:
    """
    Inverse conj(a)/|a|^2 together with the check a·inv(a) ≈ 1.

    The check can fail only at level 4, where zero divisors exist.
    """
    ctx = get_context(ctx)
    norm = abs(a)
    if norm <= ctx.tolerance:
        raise ZeroOrNearZero(f"cannot invert {a}: |a| = {norm:.3e}")
    result = cd_conj(a) * (1.0 / (norm * norm))
    check = abs(a * result - 1.0) <= ctx.tolerance
    return result, check


def cd_inv(a: CdNum, ctx: Optional[Context] = None) -> CdNum:
    return cd_inv_verified(a, ctx)[0]


def coord_extract(z: CdNum, j: int) -> float:
    """
    Read coordinate z_j using only products, conjugation and addition.

    With N = 2^r and S = (N - 2)^{-1}(-z + Σ_{k>=1} i_k (z i_k*)):
    z_0 = Re((z + S)/2) and z_j = Re((-z i_j + i_j S)/2) for j >= 1.
    """
    r = z.level
    if r < 2:
        raise ValueError(f"coordinate identities need level >= 2, got {r}")
    dim = 1 << r
    if not 0 <= j < dim:
        raise ValueError(f"coordinate index {j} outside [0, {dim - 1}]")
    acc = -z
    for k in range(1, dim):
        unit = CdNum.basis(k, r)
        acc = acc + cd_mul(unit, cd_mul(z, cd_conj(unit)))
    s = acc * (1.0 / (dim - 2))
    if j == 0:
        return ((z + s) * 0.5).real
    unit = CdNum.basis(j, r)
    return ((cd_mul(unit, s) - cd_mul(z, unit)) * 0.5).real


def _fmt_real(x: float) -> str:
    if x == 0:
        return "0.0"
    return repr(float(x))


def format_cdnum(z: CdNum) -> str:
    """Text form ``a0 + a1*e1 + ...`` with zero components omitted."""
    parts: list[str] = []
    for k, c in enumerate(z.coeffs):
        if c == 0 and not (k == 0 and not np.any(z.coeffs)):
            continue
        mag = _fmt_real(abs(c)) if parts else _fmt_real(c)
        term = mag if k == 0 else f"{mag}*e{k}"
        if parts:
            parts.append(f"{'-' if c < 0 else '+'} {term}")
        else:
            parts.append(term)
    return " ".join(parts)


def format_tuple(z: CdNum) -> str:
    return "(" + ",".join(_fmt_real(c) for c in z.coeffs) + ")"


def cd_sum(values: Iterable[CdNum], level: int) -> CdNum:
    total = CdNum.zero(level)
    for value in values:
        total = total + value
    return total


def unit_imaginary(direction: Sequence[float], level: int) -> CdNum:
    """Purely imaginary unit along ``direction`` (coefficients of i_1 ...)."""
    arr = np.zeros(1 << level)
    arr[1 : 1 + len(direction)] = direction
    norm = float(np.linalg.norm(arr))
    if norm == 0.0 or not math.isfinite(norm):
        raise ZeroOrNearZero("direction of a unit imaginary must be nonzero")
    return CdNum(arr / norm)
