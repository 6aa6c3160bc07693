"""Multiplication trees for phrases in z and conj(z)"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Sequence, Union

from ..algebra import CdNum, cd_inv
from ..errors import NonAnalyticInput


class Node:
    """Base class of tree nodes; subclasses are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Node):
    value: CdNum


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class ConjVar(Node):
    pass


@dataclass(frozen=True)
class Slot(Node):
    """Placeholder for the direction argument number ``index``."""
    index: int = 0
    conjugated: bool = False


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    """Left-chained power ((b·b)·b)··· with ``exponent`` >= 0 factors."""
    base: Node
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError(f"Pow exponent must be >= 0, got {self.exponent}; use Inv for negative powers")


@dataclass(frozen=True)
class Inv(Node):
    child: Node


@dataclass(frozen=True)
class Term:
    """Real multiple of a tree."""
    coeff: float
    node: Node


@dataclass(frozen=True)
class Sum(Node):
    terms: tuple[Term, ...]


Value = Any  # CdNum, or any ring-like value supporting +, *, conj()


def _conj_value(value: Value) -> Value:
    return value.conj()


def _invert(value: Value) -> Value:
    if isinstance(value, CdNum):
        return cd_inv(value)
    inverse = getattr(value, "inverse", None)
    if inverse is None:
        raise NonAnalyticInput(f"cannot invert a value of type {type(value).__name__}")
    return inverse()


def _one_like(value: Value, level: int) -> Value:
    if isinstance(value, CdNum):
        return CdNum.one(max(level, value.level))
    return CdNum.one(level)


class Evaluator:
    """Folds a tree with the tree's own bracketing."""

    def __init__(self, z: Value, slots: Sequence[Value] = (), level: int = 0):
        self.z = z
        self.slots = tuple(slots)
        self.level = level
        self._zc: Optional[Value] = None

    @property
    def zc(self) -> Value:
        if self._zc is None:
            self._zc = _conj_value(self.z)
        return self._zc

    def __call__(self, node: Node) -> Value:
        if isinstance(node, Const):
            return node.value
        if isinstance(node, Var):
            return self.z
        if isinstance(node, ConjVar):
            return self.zc
        if isinstance(node, Slot):
            h = self.slots[node.index]
            return _conj_value(h) if node.conjugated else h
        if isinstance(node, Mul):
            return self(node.left) * self(node.right)
        if isinstance(node, Pow):
            if node.exponent == 0:
                return _one_like(self.z, self.level)
            base = self(node.base)
            result = base
            for _ in range(node.exponent - 1):
                result = result * base
            return result
        if isinstance(node, Inv):
            return _invert(self(node.child))
        if isinstance(node, Sum):
            total = None
            for term in node.terms:
                value = self(term.node) * term.coeff if term.coeff != 1.0 else self(term.node)
                total = value if total is None else total + value
            return total if total is not None else CdNum.zero(self.level)
        raise TypeError(f"unknown node type {type(node).__name__}")


def contains(node: Node, kinds: Union[type, tuple[type, ...]]) -> bool:
    if isinstance(node, kinds):
        return True
    if isinstance(node, Mul):
        return contains(node.left, kinds) or contains(node.right, kinds)
    if isinstance(node, Pow):
        return contains(node.base, kinds)
    if isinstance(node, Inv):
        return contains(node.child, kinds)
    if isinstance(node, Sum):
        return any(contains(t.node, kinds) for t in node.terms)
    return False


def is_constant(node: Node) -> bool:
    return not contains(node, (Var, ConjVar, Slot))


def const_levels(node: Node) -> int:
    if isinstance(node, Const):
        return node.value.level
    if isinstance(node, Mul):
        return max(const_levels(node.left), const_levels(node.right))
    if isinstance(node, Pow):
        return const_levels(node.base)
    if isinstance(node, Inv):
        return const_levels(node.child)
    if isinstance(node, Sum):
        return max((const_levels(t.node) for t in node.terms), default=0)
    return 0


def conjugate(node: Node) -> Node:
    """Tree of conj(value); uses conj(ab) = conj(b)conj(a)."""
    if isinstance(node, Const):
        return Const(node.value.conj())
    if isinstance(node, Var):
        return ConjVar()
    if isinstance(node, ConjVar):
        return Var()
    if isinstance(node, Slot):
        return Slot(node.index, not node.conjugated)
    if isinstance(node, Mul):
        return Mul(conjugate(node.right), conjugate(node.left))
    if isinstance(node, Pow):
        return Pow(conjugate(node.base), node.exponent)
    if isinstance(node, Inv):
        return Inv(conjugate(node.child))
    if isinstance(node, Sum):
        return Sum(tuple(Term(t.coeff, conjugate(t.node)) for t in node.terms))
    raise TypeError(f"unknown node type {type(node).__name__}")


def substitute(node: Node, var: Node, conj_var: Node) -> Node:
    """Replace Var leaves by ``var`` and ConjVar leaves by ``conj_var``."""
    if isinstance(node, Var):
        return var
    if isinstance(node, ConjVar):
        return conj_var
    if isinstance(node, Mul):
        return Mul(substitute(node.left, var, conj_var), substitute(node.right, var, conj_var))
    if isinstance(node, Pow):
        return Pow(substitute(node.base, var, conj_var), node.exponent)
    if isinstance(node, Inv):
        return Inv(substitute(node.child, var, conj_var))
    if isinstance(node, Sum):
        return Sum(tuple(Term(t.coeff, substitute(t.node, var, conj_var)) for t in node.terms))
    return node


def differentiate(node: Node, wrt_conj: bool, slot: int) -> list[Term]:
    """
    Leibniz expansion: one term per matching leaf, the leaf replaced by a slot.

    ``wrt_conj`` selects ConjVar leaves (slot conjugated) instead of Var leaves.
    """
    if isinstance(node, (Const, Slot)):
        return []
    if isinstance(node, Var):
        return [] if wrt_conj else [Term(1.0, Slot(slot))]
    if isinstance(node, ConjVar):
        return [Term(1.0, Slot(slot, conjugated=True))] if wrt_conj else []
    if isinstance(node, Mul):
        out = [Term(t.coeff, Mul(t.node, node.right)) for t in differentiate(node.left, wrt_conj, slot)]
        out += [Term(t.coeff, Mul(node.left, t.node)) for t in differentiate(node.right, wrt_conj, slot)]
        return out
    if isinstance(node, Pow):
        inner = differentiate(node.base, wrt_conj, slot)
        out: list[Term] = []
        for j in range(node.exponent):
            for t in inner:
                tree = t.node if j == 0 else Mul(Pow(node.base, j), t.node)
                for _ in range(node.exponent - 1 - j):
                    tree = Mul(tree, node.base)
                out.append(Term(t.coeff, tree))
        return out
    if isinstance(node, Inv):
        # d(c^{-1}) = -(c^{-1} dc) c^{-1}
        return [Term(-t.coeff, Mul(Mul(node, t.node), node)) for t in differentiate(node.child, wrt_conj, slot)]
    if isinstance(node, Sum):
        out = []
        for term in node.terms:
            out += [Term(term.coeff * t.coeff, t.node) for t in differentiate(term.node, wrt_conj, slot)]
        return out
    raise TypeError(f"unknown node type {type(node).__name__}")


def expand(node: Node) -> list[Term]:
    """Distribute products and powers over Sum nodes."""
    if isinstance(node, Sum):
        out: list[Term] = []
        for term in node.terms:
            out += [Term(term.coeff * t.coeff, t.node) for t in expand(term.node)]
        return out
    if isinstance(node, Mul):
        return [
            Term(a.coeff * b.coeff, Mul(a.node, b.node))
            for a in expand(node.left)
            for b in expand(node.right)
        ]
    if isinstance(node, Pow):
        parts = expand(node.base)
        if len(parts) == 1 and parts[0].coeff == 1.0:
            return [Term(1.0, Pow(parts[0].node, node.exponent))]
        if node.exponent == 0:
            return [Term(1.0, node)]
        chain = parts
        for _ in range(node.exponent - 1):
            chain = [Term(a.coeff * b.coeff, Mul(a.node, b.node)) for a in chain for b in parts]
        return chain
    if isinstance(node, Inv):
        parts = expand(node.child)
        if len(parts) == 1:
            return [Term(1.0 / parts[0].coeff, Inv(parts[0].node))]
        return [Term(1.0, node)]
    return [Term(1.0, node)]
