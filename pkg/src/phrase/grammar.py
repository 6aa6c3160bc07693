"""Expression grammar: text ↔ Phrase"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..algebra import MAX_LEVEL, CdNum, format_tuple
from ..errors import ExpressionSyntaxError, UnknownSymbol
from .nodes import Const, ConjVar, Inv, Mul, Node, Pow, Slot, Sum, Term, Var, conjugate
from .phrase import Phrase

# expr   := term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := atom ('^' INT)?
# atom   := REAL | 'z' | ('conj'|'inv') '(' expr ')' | 'e' INT | '(' expr ')' | tuple
# tuple  := '(' REAL (',' REAL)* ')'

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^(),])"
    r")"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | ident | op | end
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            offset = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExpressionSyntaxError(f"unexpected character {text[offset]!r}", offset)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def _level_for_size(size: int) -> int:
    level = 0
    while (1 << level) < size:
        level += 1
    return level


class _Parser:
    def __init__(self, text: str, level: int):
        self.tokens = tokenize(text)
        self.index = 0
        self.level = level

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def is_op(self, text: str, token: Optional[Token] = None) -> bool:
        token = token or self.current
        return token.kind == "op" and token.text == text

    def expect(self, text: str) -> Token:
        if not self.is_op(text):
            found = self.current.text or "end of input"
            raise ExpressionSyntaxError(f"expected {text!r}, found {found!r}", self.current.position)
        return self.advance()

    def parse(self) -> list[Term]:
        terms = self.expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.current.text!r}", self.current.position)
        return terms

    def expr(self) -> list[Term]:
        terms = [Term(1.0, self.term())]
        while self.is_op("+") or self.is_op("-"):
            sign = 1.0 if self.advance().text == "+" else -1.0
            terms.append(Term(sign, self.term()))
        return terms

    def term(self) -> Node:
        node = self.factor()
        while self.is_op("*"):
            self.advance()
            node = Mul(node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.atom()
        if self.is_op("^"):
            self.advance()
            token = self.advance()
            if token.kind != "num" or not token.text.isdigit():
                raise ExpressionSyntaxError("exponent must be a non-negative integer", token.position)
            node = Pow(node, int(token.text))
        return node

    def real(self) -> float:
        sign = 1.0
        if self.is_op("-"):
            self.advance()
            sign = -1.0
        token = self.advance()
        if token.kind != "num":
            raise ExpressionSyntaxError(f"expected a number, found {token.text!r}", token.position)
        return sign * float(token.text)

    def _starts_tuple(self) -> bool:
        offset = 1
        if self.is_op("-", self.peek(offset)):
            offset += 1
        return self.peek(offset).kind == "num" and self.is_op(",", self.peek(offset + 1))

    def atom(self) -> Node:
        token = self.current
        if token.kind == "num" or (self.is_op("-") and self.peek().kind == "num"):
            return Const(CdNum.real_number(self.real(), self.level))
        if token.kind == "ident":
            return self.symbol()
        if self.is_op("("):
            if self._starts_tuple():
                return self.tuple_constant()
            self.advance()
            terms = self.expr()
            self.expect(")")
            if len(terms) == 1 and terms[0].coeff == 1.0:
                return terms[0].node
            return Sum(tuple(terms))
        found = token.text or "end of input"
        raise ExpressionSyntaxError(f"unexpected {found!r}", token.position)

    def symbol(self) -> Node:
        token = self.advance()
        name = token.text
        if name == "z":
            return Var()
        if name in ("conj", "inv"):
            self.expect("(")
            terms = self.expr()
            self.expect(")")
            inner = terms[0].node if len(terms) == 1 and terms[0].coeff == 1.0 else Sum(tuple(terms))
            return conjugate(inner) if name == "conj" else Inv(inner)
        match = re.fullmatch(r"e(\d+)", name)
        if match:
            index = int(match.group(1))
            needed = _level_for_size(index + 1)
            if needed > MAX_LEVEL:
                raise UnknownSymbol(f"basis unit {name!r} exceeds level {MAX_LEVEL}", token.position)
            return Const(CdNum.basis(index, max(self.level, needed)))
        raise UnknownSymbol(f"unknown symbol {name!r}", token.position)

    def tuple_constant(self) -> Node:
        start = self.expect("(").position
        values = [self.real()]
        while self.is_op(","):
            self.advance()
            values.append(self.real())
        self.expect(")")
        level = max(self.level, _level_for_size(len(values)))
        if level > MAX_LEVEL:
            raise ExpressionSyntaxError(f"tuple of {len(values)} components exceeds level {MAX_LEVEL}", start)
        return Const(CdNum(values + [0.0] * ((1 << level) - len(values))))


def parse_expression(text: str, level: int = 0) -> Phrase:
    """
    Parse an expression in z.

    Args:
        text: Expression text; ``*`` groups to the left
        level: Minimum algebra level for constants

    Returns:
        Phrase whose trees mirror the written bracketing

    Raises:
        ExpressionSyntaxError: malformed text, with the offending offset
        UnknownSymbol: identifier other than z, conj, inv or e<k>
    """
    return Phrase(_Parser(text, level).parse(), level)


def parse_point(text: str, level: int = 0) -> CdNum:
    """Parse a constant expression such as ``1+e1`` or ``(0,1,0,0)``."""
    phrase = parse_expression(text, level)
    if not phrase.is_constant:
        raise ExpressionSyntaxError(f"point {text!r} must not depend on z", 0)
    value = phrase(CdNum.zero(phrase.level))
    return value.promote(max(level, value.level))


# printing

def _format_real(x: float) -> str:
    return repr(float(x))


def _format_const(value: CdNum) -> str:
    coeffs = value.coeffs
    if value.is_real():
        return _format_real(value.real)
    nonzero = [k for k, c in enumerate(coeffs) if c != 0.0]
    if len(nonzero) == 1 and coeffs[nonzero[0]] == 1.0:
        return f"e{nonzero[0]}"
    return format_tuple(value)


def _is_simple_base(node: Node) -> bool:
    if isinstance(node, (Var, ConjVar, Slot)):
        return True
    return isinstance(node, Const) and not _format_const(node.value).startswith("-")


def _format_node(node: Node) -> str:
    if isinstance(node, Const):
        return _format_const(node.value)
    if isinstance(node, Var):
        return "z"
    if isinstance(node, ConjVar):
        return "conj(z)"
    if isinstance(node, Slot):
        return f"conj(h{node.index})" if node.conjugated else f"h{node.index}"
    if isinstance(node, Mul):
        left = _format_node(node.left)
        right = _format_node(node.right)
        if isinstance(node.left, Sum):
            left = f"({left})"
        if isinstance(node.right, (Mul, Sum)):
            right = f"({right})"
        return f"{left}*{right}"
    if isinstance(node, Pow):
        base = _format_node(node.base)
        if not _is_simple_base(node.base) or isinstance(node.base, Sum):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Inv):
        return f"inv({_format_node(node.child)})"
    if isinstance(node, Sum):
        return _format_terms(node.terms)
    raise TypeError(f"unknown node type {type(node).__name__}")


def _format_terms(terms: tuple[Term, ...]) -> str:
    if not terms:
        return "0.0"
    parts = []
    for i, term in enumerate(terms):
        body = _format_node(term.node)
        if isinstance(term.node, Sum):
            body = f"({body})"
        magnitude = abs(term.coeff)
        if magnitude != 1.0:
            if isinstance(term.node, Mul):
                body = f"({body})"
            body = f"{_format_real(magnitude)}*{body}"
        negative = term.coeff < 0
        if i == 0:
            parts.append(f"-1.0*{body}" if negative and magnitude == 1.0 else (f"-{body}" if negative else body))
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


def format_phrase(p: Phrase) -> str:
    """Text form that parses back to the same trees."""
    return _format_terms(p.terms)
