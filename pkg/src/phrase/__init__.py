"""Symbolic phrases in z and conj(z)"""

from .nodes import Node, Const, Var, ConjVar, Slot, Mul, Pow, Inv, Sum, Term
from .phrase import (
    Phrase,
    OperatorPhrase,
    Wrt,
    eval_phrase,
    diff_phrase,
    total_derivative,
    compose_phrase,
    phrase_sum,
)
from .antiderivative import LeftShape, left_decompose, antiderivative_left
from .grammar import parse_expression, parse_point, format_phrase, tokenize

__all__ = [
    "Node",
    "Const",
    "Var",
    "ConjVar",
    "Slot",
    "Mul",
    "Pow",
    "Inv",
    "Sum",
    "Term",
    "Phrase",
    "OperatorPhrase",
    "Wrt",
    "eval_phrase",
    "diff_phrase",
    "total_derivative",
    "compose_phrase",
    "phrase_sum",
    "LeftShape",
    "left_decompose",
    "antiderivative_left",
    "parse_expression",
    "parse_point",
    "format_phrase",
    "tokenize",
]
