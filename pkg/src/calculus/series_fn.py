"""Truncated power series whose degree-k coefficients are homogeneous phrases"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from ..algebra import CdNum, LinOpR
from ..errors import SeriesDiverged
from ..phrase import Phrase, antiderivative_left, diff_phrase
from ..phrase.nodes import Const, Mul, Pow, Term, Var


def _real_power_term(coeff: float, k: int, level: int) -> Phrase:
    node = Pow(Var(), k) if k > 0 else Const(CdNum.one(level))
    return Phrase([Term(coeff, node)], level)


@dataclass(frozen=True)
class SeriesFn:
    """
    Σ_k P_k(z − center) truncated at ``order``.

    ``coeff_phrases[k]`` is homogeneous of degree k in w = z − center.
    ``radius`` is the declared convergence radius estimate (inf for
    polynomials).
    """

    center: CdNum
    coeff_phrases: tuple[Phrase, ...]
    radius: float = math.inf
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.coeff_phrases) - 1

    @property
    def level(self) -> int:
        return max([self.center.level] + [p.level for p in self.coeff_phrases])

    @classmethod
    def from_real_taylor(
        cls,
        coeffs: Sequence[float],
        center: float = 0.0,
        level: int = 0,
        radius: float = math.inf,
        name: str = "",
    ) -> "SeriesFn":
        phrases = tuple(_real_power_term(float(c), k, level) for k, c in enumerate(coeffs))
        return cls(CdNum.real_number(center, level), phrases, radius, name)

    @classmethod
    def from_cd_taylor(
        cls,
        coeffs: Sequence[CdNum],
        center: CdNum,
        radius: float = math.inf,
        name: str = "",
    ) -> "SeriesFn":
        """Series Σ c_k·w^k with left constant coefficients."""
        level = max([center.level] + [c.level for c in coeffs])
        phrases = []
        for k, c in enumerate(coeffs):
            node = Const(c) if k == 0 else Mul(Const(c), Pow(Var(), k))
            phrases.append(Phrase([Term(1.0, node)], level))
        return cls(center, tuple(phrases), radius, name)

    def _offset(self, z: CdNum) -> CdNum:
        w = z - self.center
        if abs(w) > self.radius:
            raise SeriesDiverged(f"|z - center| = {abs(w):.4g} exceeds radius {self.radius:.4g}")
        return w

    def __call__(self, z: CdNum) -> CdNum:
        w = self._offset(z)
        total = CdNum.zero(max(self.level, z.level))
        for phrase in self.coeff_phrases:
            total = total + phrase(w)
        return total

    def tail_bound(self, z: CdNum) -> float:
        """Size of the last retained term, a proxy for the truncation error."""
        return abs(self.coeff_phrases[-1](self._offset(z)))

    def apply_derivative(self, z: CdNum, h: CdNum) -> CdNum:
        w = self._offset(z)
        level = max(self.level, z.level, h.level)
        total = CdNum.zero(level)
        for phrase in self.coeff_phrases[1:]:
            total = total + diff_phrase(phrase)(w, h)
        return total

    def derivative(self, z: CdNum) -> LinOpR:
        level = max(self.level, z.level)
        return LinOpR.from_function(level, lambda h: self.apply_derivative(z, h))

    def antiderivative(self) -> "SeriesFn":
        """Termwise left-algorithm primitive, vanishing at the center."""
        level = self.level
        phrases = [Phrase([], level)]
        phrases += [antiderivative_left(p) for p in self.coeff_phrases]
        return SeriesFn(self.center, tuple(phrases), self.radius, f"int {self.name}".strip())

    def as_callable(self) -> Callable[[CdNum], CdNum]:
        return self.__call__


def exp_series(center: float = 0.0, order: int = 24, level: int = 0) -> SeriesFn:
    scale = math.exp(center)
    return SeriesFn.from_real_taylor(
        [scale / math.factorial(k) for k in range(order + 1)], center, level, name="exp"
    )


def sin_series(center: float = 0.0, order: int = 24, level: int = 0) -> SeriesFn:
    # derivatives cycle sin, cos, -sin, -cos
    cycle = (math.sin(center), math.cos(center), -math.sin(center), -math.cos(center))
    coeffs = [cycle[k % 4] / math.factorial(k) for k in range(order + 1)]
    return SeriesFn.from_real_taylor(coeffs, center, level, name="sin")


def cos_series(center: float = 0.0, order: int = 24, level: int = 0) -> SeriesFn:
    cycle = (math.cos(center), -math.sin(center), -math.cos(center), math.sin(center))
    coeffs = [cycle[k % 4] / math.factorial(k) for k in range(order + 1)]
    return SeriesFn.from_real_taylor(coeffs, center, level, name="cos")

