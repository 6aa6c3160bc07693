"""R-linear operators on A_r stored as real matrices"""

from __future__ import annotations

from typing import Callable, Union

import numpy as np

from ..errors import LevelMismatch, NonInvertibleOperator
from .cdnum import CdNum


class LinOpR:
    """
    R-homogeneous additive operator on A_r acting on coefficient vectors.

    Column k of ``matrix`` is the image of the basis unit i_k.
    """

    __slots__ = ("level", "matrix")

    def __init__(self, level: int, matrix: np.ndarray):
        dim = 1 << level
        matrix = np.array(matrix, dtype=float)
        if matrix.shape != (dim, dim):
            raise LevelMismatch(f"operator on level {level} needs a {dim}x{dim} matrix, got {matrix.shape}")
        matrix.setflags(write=False)
        self.level = level
        self.matrix = matrix

    @classmethod
    def identity(cls, level: int) -> "LinOpR":
        return cls(level, np.eye(1 << level))

    @classmethod
    def zero(cls, level: int) -> "LinOpR":
        dim = 1 << level
        return cls(level, np.zeros((dim, dim)))

    @classmethod
    def from_function(cls, level: int, fn: Callable[[CdNum], CdNum]) -> "LinOpR":
        """Tabulate an R-linear map by its values on the basis units."""
        dim = 1 << level
        columns = [fn(CdNum.basis(k, level)).promote(level).coeffs for k in range(dim)]
        return cls(level, np.column_stack(columns))

    @classmethod
    def left_mul(cls, a: CdNum) -> "LinOpR":
        """h ↦ a·h"""
        return cls.from_function(a.level, lambda h: a * h)

    @classmethod
    def right_mul(cls, a: CdNum) -> "LinOpR":
        """h ↦ h·a"""
        return cls.from_function(a.level, lambda h: h * a)

    @classmethod
    def conjugation(cls, level: int) -> "LinOpR":
        diag = -np.ones(1 << level)
        diag[0] = 1.0
        return cls(level, np.diag(diag))

    def apply(self, h: CdNum) -> CdNum:
        h = h.promote(max(h.level, self.level))
        if h.level != self.level:
            raise LevelMismatch(f"operator on level {self.level} cannot act on level {h.level}")
        return CdNum(self.matrix @ h.coeffs)

    __call__ = apply

    def __matmul__(self, other: "LinOpR") -> "LinOpR":
        self._check(other)
        return LinOpR(self.level, self.matrix @ other.matrix)

    def __add__(self, other: "LinOpR") -> "LinOpR":
        self._check(other)
        return LinOpR(self.level, self.matrix + other.matrix)

    def __sub__(self, other: "LinOpR") -> "LinOpR":
        self._check(other)
        return LinOpR(self.level, self.matrix - other.matrix)

    def __neg__(self) -> "LinOpR":
        return LinOpR(self.level, -self.matrix)

    def __mul__(self, scalar: Union[int, float]) -> "LinOpR":
        if isinstance(scalar, (int, float)):
            return LinOpR(self.level, self.matrix * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def then_left(self, a: CdNum) -> "LinOpR":
        """h ↦ a·(self.h)"""
        return LinOpR.left_mul(a.promote(self.level)) @ self

    def then_right(self, a: CdNum) -> "LinOpR":
        """h ↦ (self.h)·a"""
        return LinOpR.right_mul(a.promote(self.level)) @ self

    def inverse(self, cond_limit: float = 1e12) -> "LinOpR":
        cond = np.linalg.cond(self.matrix)
        if not np.isfinite(cond) or cond > cond_limit:
            raise NonInvertibleOperator(f"operator is singular (condition number {cond:.3e})")
        return LinOpR(self.level, np.linalg.inv(self.matrix))

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def _check(self, other: "LinOpR") -> None:
        if not isinstance(other, LinOpR):
            raise TypeError(f"expected LinOpR, got {type(other).__name__}")
        if other.level != self.level:
            raise LevelMismatch(f"operators on levels {self.level} and {other.level} do not compose")

    def __repr__(self) -> str:
        return f"LinOpR(level={self.level}, matrix={self.matrix.tolist()})"
