"""Phrases: real combinations of bracketed words in z, conj(z) and constants"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Sequence, Union

from ..algebra import CdNum, LinOpR
from .nodes import (
    Const,
    ConjVar,
    Evaluator,
    Inv,
    Mul,
    Node,
    Pow,
    Sum,
    Term,
    Var,
    conjugate,
    const_levels,
    contains,
    differentiate,
    expand,
    is_constant,
    substitute,
)


class Wrt(str, Enum):
    """Differentiation variable"""
    Z = "z"
    CONJ = "conj"


Operand = Union["Phrase", CdNum, int, float]


def _fold(node: Node) -> Node:
    """Fold products of adjacent constants."""
    if isinstance(node, Mul):
        left, right = _fold(node.left), _fold(node.right)
        if isinstance(left, Const) and isinstance(right, Const):
            return Const(left.value * right.value)
        return Mul(left, right)
    if isinstance(node, Pow):
        base = _fold(node.base)
        if isinstance(base, Const):
            return Const(base.value ** node.exponent)
        return Pow(base, node.exponent)
    return node


class Phrase:
    """
    Finite sum Σ c_k·w_k of real multiples of multiplication trees.

    ``arity`` counts the direction slots: 0 for a plain phrase, 1 for the
    derivative operator of a phrase, 2 for a second derivative, and so on.
    Evaluation works on anything supporting +, * and conj(), which lets the
    series solver feed truncated Taylor series through the same trees.
    """

    __slots__ = ("terms", "level", "arity")

    def __init__(self, terms: Iterable[Term], level: int = 0, arity: int = 0):
        kept = tuple(t for t in terms if t.coeff != 0.0)
        self.terms = kept
        self.level = max([level] + [const_levels(t.node) for t in kept])
        self.arity = arity

    # builders

    @classmethod
    def variable(cls, level: int = 0) -> "Phrase":
        return cls([Term(1.0, Var())], level)

    @classmethod
    def conj_variable(cls, level: int = 0) -> "Phrase":
        return cls([Term(1.0, ConjVar())], level)

    @classmethod
    def constant(cls, value: Union[CdNum, float], level: int = 0) -> "Phrase":
        value = CdNum.coerce(value, level)
        return cls([Term(1.0, Const(value))], level)

    @classmethod
    def from_node(cls, node: Node, level: int = 0) -> "Phrase":
        return cls([Term(1.0, node)], level)

    @classmethod
    def monomial(cls, a: CdNum, n: int, b: CdNum, level: int = 0) -> "Phrase":
        """The word (a·z^n)·b."""
        power: Node = Pow(Var(), n) if n >= 0 else Inv(Pow(Var(), -n))
        return cls([Term(1.0, Mul(Mul(Const(a), power), Const(b)))], level)

    def _coerce(self, other: Operand) -> "Phrase":
        if isinstance(other, Phrase):
            return other
        if isinstance(other, (CdNum, int, float)):
            return Phrase.constant(other, self.level)
        raise TypeError(f"cannot combine Phrase with {type(other).__name__}")

    # structure

    @property
    def node(self) -> Node:
        """The whole phrase as a single tree."""
        if len(self.terms) == 1 and self.terms[0].coeff == 1.0:
            return self.terms[0].node
        if not self.terms:
            return Const(CdNum.zero(self.level))
        return Sum(self.terms)

    @property
    def has_conj(self) -> bool:
        return any(contains(t.node, ConjVar) for t in self.terms)

    @property
    def is_constant(self) -> bool:
        return all(is_constant(t.node) for t in self.terms)

    def expanded(self) -> "Phrase":
        out = []
        for term in self.terms:
            out += [Term(term.coeff * t.coeff, _fold(t.node)) for t in expand(term.node)]
        return Phrase(out, self.level, self.arity)

    # arithmetic

    def __add__(self, other: Operand) -> "Phrase":
        other = self._coerce(other)
        return Phrase(self.terms + other.terms, max(self.level, other.level), max(self.arity, other.arity))

    __radd__ = __add__

    def __neg__(self) -> "Phrase":
        return Phrase([Term(-t.coeff, t.node) for t in self.terms], self.level, self.arity)

    def __sub__(self, other: Operand) -> "Phrase":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Operand) -> "Phrase":
        return self._coerce(other) - self

    def __mul__(self, other: Operand) -> "Phrase":
        if isinstance(other, (int, float)):
            return Phrase([Term(t.coeff * float(other), t.node) for t in self.terms], self.level, self.arity)
        other = self._coerce(other)
        terms = [
            Term(a.coeff * b.coeff, _fold(Mul(a.node, b.node)))
            for a in self.terms
            for b in other.terms
        ]
        return Phrase(terms, max(self.level, other.level), self.arity + other.arity)

    def __rmul__(self, other: Operand) -> "Phrase":
        if isinstance(other, (int, float)):
            return self * other
        return self._coerce(other) * self

    def __pow__(self, n: int) -> "Phrase":
        if n >= 0:
            return Phrase.from_node(_fold(Pow(self.node, n)), self.level)
        return Phrase.from_node(Inv(Pow(self.node, -n)), self.level)

    def inverse(self) -> "Phrase":
        return Phrase.from_node(Inv(self.node), self.level)

    # evaluation and calculus

    def __call__(self, z, *slots):
        return eval_phrase(self, z, *slots)

    def conj(self) -> "Phrase":
        return Phrase([Term(t.coeff, conjugate(t.node)) for t in self.terms], self.level, self.arity)

    def diff(self, wrt: Union[Wrt, str] = Wrt.Z) -> "OperatorPhrase":
        return diff_phrase(self, wrt)

    def compose(self, inner: "Phrase") -> "Phrase":
        return compose_phrase(self, inner)

    def __str__(self) -> str:
        from .grammar import format_phrase

        return format_phrase(self)

    def __repr__(self) -> str:
        return f"Phrase({self}, level={self.level}, arity={self.arity})"


class OperatorPhrase(Phrase):
    """Phrase whose last slot is a real-linear direction argument."""

    __slots__ = ()

    def to_linop(self, z: CdNum, *fixed: CdNum) -> LinOpR:
        """Matrix of h ↦ self(z, *fixed, h) at fixed z."""
        level = max([z.level, self.level] + [f.level for f in fixed])
        z = z.promote(level)
        return LinOpR.from_function(level, lambda h: self(z, *fixed, h))

    def apply(self, z: CdNum, h: CdNum, *fixed: CdNum) -> CdNum:
        return self(z, *fixed, h)


def _as_operator(p: Phrase, arity: int) -> OperatorPhrase:
    return OperatorPhrase(p.terms, p.level, arity)


def eval_phrase(p: Phrase, z, *slots):
    """
    Evaluate a phrase, folding each tree in its own bracketing.

    Args:
        p: Phrase of arity k
        z: Point (CdNum, or a series-like value)
        *slots: k direction arguments

    Returns:
        Value of the same kind as z
    """
    if len(slots) != p.arity:
        raise TypeError(f"phrase of arity {p.arity} called with {len(slots)} directions")
    if isinstance(z, CdNum) and z.level < p.level:
        z = z.promote(p.level)
    level = p.level if not isinstance(z, CdNum) else max(p.level, z.level)
    evaluator = Evaluator(z, slots, level)
    total = None
    for term in p.terms:
        value = evaluator(term.node)
        if term.coeff != 1.0:
            value = value * term.coeff
        total = value if total is None else total + value
    if total is None:
        return CdNum.zero(level)
    if isinstance(total, CdNum) and total.level < level:
        total = total.promote(level)
    return total


def diff_phrase(p: Phrase, wrt: Union[Wrt, str] = Wrt.Z) -> OperatorPhrase:
    """D_z or D_z̃ of a phrase; the new slot is appended after the existing ones."""
    wrt = Wrt(wrt)
    out: list[Term] = []
    for term in p.terms:
        out += [Term(term.coeff * t.coeff, t.node) for t in differentiate(term.node, wrt is Wrt.CONJ, p.arity)]
    return _as_operator(Phrase(out, p.level), p.arity + 1)


def total_derivative(p: Phrase) -> OperatorPhrase:
    """The full real derivative D_z + D_z̃ acting on one direction."""
    dz = diff_phrase(p, Wrt.Z)
    dzc = diff_phrase(p, Wrt.CONJ)
    return _as_operator(Phrase(dz.terms + dzc.terms, p.level), p.arity + 1)


def compose_phrase(outer: Phrase, inner: Phrase) -> Phrase:
    """outer(inner(z)); ConjVar leaves of outer receive the conjugate of inner."""
    if outer.arity or inner.arity:
        raise ValueError("only plain phrases can be composed")
    var = inner.node
    conj_var = inner.conj().node
    terms = [Term(t.coeff, substitute(t.node, var, conj_var)) for t in outer.terms]
    return Phrase(terms, max(outer.level, inner.level))


def phrase_sum(phrases: Sequence[Phrase]) -> Phrase:
    terms: list[Term] = []
    level = 0
    for p in phrases:
        terms += p.terms
        level = max(level, p.level)
    return Phrase(terms, level)
