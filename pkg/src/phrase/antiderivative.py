"""Left-algorithm antiderivatives of phrases"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..algebra import CdNum
from ..errors import NegativePowerOne, NotLeftReducible
from .nodes import Const, ConjVar, Evaluator, Inv, Mul, Node, Pow, Slot, Sum, Term, Var, is_constant
from .phrase import Phrase


@dataclass(frozen=True)
class LeftShape:
    """
    A term coeff·(a·z^n)·b; ``a``/``b`` of None stand for 1.

    ``has_var`` is False for a constant term, whose value is then coeff·a.
    """

    coeff: float
    a: Optional[CdNum]
    n: int
    b: Optional[CdNum]
    has_var: bool = True

    def node(self, exponent: Optional[int] = None) -> Node:
        n = self.n if exponent is None else exponent
        tree: Node = Pow(Var(), n) if n >= 0 else Inv(Pow(Var(), -n))
        if self.a is not None:
            tree = Mul(Const(self.a), tree)
        if self.b is not None:
            tree = Mul(tree, Const(self.b))
        return tree


def _mul(x: Optional[CdNum], y: Optional[CdNum]) -> Optional[CdNum]:
    if x is None:
        return y
    if y is None:
        return x
    return x * y


def _split_real(value: Optional[CdNum]) -> tuple[float, Optional[CdNum]]:
    if value is not None and value.is_real():
        return value.real, None
    return 1.0, value


def _shape(node: Node, level: int) -> LeftShape:
    if is_constant(node):
        value = Evaluator(None, (), level)(node)
        scalar, rest = _split_real(value)
        return LeftShape(scalar, rest, 0, None, has_var=False)
    if isinstance(node, Var):
        return LeftShape(1.0, None, 1, None)
    if isinstance(node, (ConjVar, Slot)):
        raise NotLeftReducible("terms containing conj(z) have no left-algorithm antiderivative")
    if isinstance(node, Sum):
        raise NotLeftReducible("expand the phrase before shape analysis")
    if isinstance(node, Pow):
        inner = _shape(node.base, level)
        if inner.a is None and inner.b is None:
            return LeftShape(inner.coeff ** node.exponent, None, inner.n * node.exponent, None)
        raise NotLeftReducible("power of a word with constants is not of the form (a z^n) b")
    if isinstance(node, Inv):
        inner = _shape(node.child, level)
        if inner.a is None and inner.b is None and inner.coeff != 0.0:
            return LeftShape(1.0 / inner.coeff, None, -inner.n, None)
        raise NotLeftReducible("inverse of a word with constants is not of the form (a z^n) b")
    if isinstance(node, Mul):
        return _shape_product(_shape(node.left, level), _shape(node.right, level), level)
    raise NotLeftReducible(f"unsupported node {type(node).__name__}")


def _shape_product(left: LeftShape, right: LeftShape, level: int) -> LeftShape:
    scalar = left.coeff * right.coeff
    if not left.has_var:
        if left.a is None:
            return LeftShape(scalar, right.a, right.n, right.b, right.has_var)
        if not right.has_var:
            return LeftShape(scalar, _mul(left.a, right.a), 0, None, has_var=False)
        if right.a is None and right.b is None:
            return LeftShape(scalar, left.a, right.n, None)
        if level <= 2:
            return LeftShape(scalar, _mul(left.a, right.a), right.n, right.b)
        raise NotLeftReducible(f"constant times a bracketed word is not reducible at level {level}")
    if not right.has_var:
        if right.a is None:
            return LeftShape(scalar, left.a, left.n, left.b)
        if left.b is None:
            return LeftShape(scalar, left.a, left.n, right.a)
        if level <= 2:
            return LeftShape(scalar, left.a, left.n, _mul(left.b, right.a))
        raise NotLeftReducible(f"word times constant is not reducible at level {level}")
    n = left.n + right.n
    # two words in z: Artin's theorem covers one extra constant up to octonions
    if level <= 3 and left.b is None and right.a is None and right.b is None:
        return LeftShape(scalar, left.a, n, None)
    if level <= 3 and left.a is None and left.b is None and right.a is None:
        return LeftShape(scalar, None, n, right.b)
    if level <= 2:
        middle = _mul(left.b, right.a)
        if middle is None or middle.is_real(1e-14):
            factor = 1.0 if middle is None else middle.real
            return LeftShape(scalar * factor, left.a, n, right.b)
    raise NotLeftReducible(f"product of words is not of the form (a z^n) b at level {level}")


def left_decompose(p: Phrase) -> list[LeftShape]:
    """
    Rewrite each term of the expanded phrase as coeff·(a·z^n)·b.

    Raises:
        NotLeftReducible: a term lies outside the left algorithm's domain
    """
    shapes = []
    for term in p.expanded().terms:
        shape = _shape(term.node, p.level)
        if not shape.has_var:
            shape = LeftShape(shape.coeff, shape.a, 0, None)
        shapes.append(LeftShape(term.coeff * shape.coeff, shape.a, shape.n, shape.b))
    return shapes


def antiderivative_left(p: Phrase) -> Phrase:
    """
    Antiderivative g with [D_z g].1 = p, term by term (a z^n) b ↦ (a z^{n+1}/(n+1)) b.

    Raises:
        NotLeftReducible: a term has no left-algorithm shape
        NegativePowerOne: a term is a multiple of (a z^{-1}) b, whose primitive is logarithmic
    """
    terms = []
    for shape in left_decompose(p):
        if shape.n == -1:
            raise NegativePowerOne(f"term {shape.coeff}·(a z^-1) b integrates to a logarithm")
        terms.append(Term(shape.coeff / (shape.n + 1), shape.node(shape.n + 1)))
    return Phrase(terms, p.level)
