"""Tests for phrases: parsing, evaluation, derivatives and the left algorithm"""

import pytest

from src.algebra import CdNum, cd_inv
from src.calculus import directional_fd
from src.errors import ExpressionSyntaxError, NegativePowerOne, NotLeftReducible, UnknownSymbol
from src.phrase import (
    Phrase,
    antiderivative_left,
    compose_phrase,
    format_phrase,
    left_decompose,
    parse_expression,
    parse_point,
    total_derivative,
)


def test_parse_sum_of_monomials():
    p = parse_expression("z^2 + e1*z*e2")
    assert len(p.terms) == 2
    z = CdNum([0.3, -0.2, 0.5, 0.1])
    e1, e2 = CdNum.basis(1, 2), CdNum.basis(2, 2)
    assert p(z).isclose(z * z + (e1 * z) * e2, 1e-15)


def test_conjugate_variable():
    p = parse_expression("conj(z)*z")
    assert p.has_conj
    z = CdNum([1.0, 2.0, -1.0, 0.5])
    assert p(z).isclose(abs(z) ** 2, 1e-12)


def test_bracketing_is_preserved():
    z = CdNum.basis(4, 3)
    left = parse_expression("e1*z*e2")
    right = parse_expression("(e1*(z*e2))")
    assert not left(z).isclose(right(z), 1e-9)


def test_basis_units_raise_the_level():
    assert parse_expression("e5*z").level == 3
    assert parse_point("(1,2,3,4,5)").level == 3
    assert parse_point("1+e1").isclose(CdNum([1.0, 1.0]), 0.0)


def test_syntax_errors_carry_position():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("z + * 2")
    assert info.value.position == 4
    with pytest.raises(UnknownSymbol):
        parse_expression("z + w")
    with pytest.raises(UnknownSymbol):
        parse_expression("e16*z")


def test_point_must_be_constant():
    with pytest.raises(ExpressionSyntaxError):
        parse_point("z + 1")


def test_print_then_parse_evaluates_the_same(random_cd):
    p = parse_expression("(e1*z)*e2 + 3*z^3 - conj(z)*e3 + 0.5")
    again = parse_expression(str(p))
    for _ in range(5):
        z = random_cd(3)
        assert again(z).isclose(p(z), 1e-12)


@pytest.mark.parametrize("text", ["z^3", "e1*z*e2*z", "conj(z)*z + z*e5", "(z + e1)^2*e3"])
def test_total_derivative_matches_differences(text, random_cd):
    p = parse_expression(text, 3)
    D = total_derivative(p)
    for _ in range(3):
        z, h = random_cd(3, scale=0.7), random_cd(3)
        assert D.apply(z, h).isclose(directional_fd(p, z, h, stencil=5), 1e-7)


def test_to_linop_agrees_with_apply(random_cd):
    D = total_derivative(parse_expression("z^2*e1"))
    z, h = random_cd(2), random_cd(2)
    assert D.to_linop(z).apply(h).isclose(D.apply(z, h), 1e-12)


def test_chain_rule(random_cd):
    outer = parse_expression("z^2 + e1*z", 3)
    inner = parse_expression("z*e2*z + z", 3)
    composed = compose_phrase(outer, inner)
    D_outer, D_inner, D_comp = total_derivative(outer), total_derivative(inner), total_derivative(composed)
    for _ in range(10):
        z, h = random_cd(3, scale=0.5), random_cd(3)
        chained = D_outer.apply(inner(z), D_inner.apply(z, h))
        assert D_comp.apply(z, h).isclose(chained, 1e-8)


def test_second_derivative_is_symmetric(random_cd):
    p = parse_expression("z^3 + e1*z^2", 3)
    D2 = total_derivative(total_derivative(p))
    z, h, k = random_cd(3), random_cd(3), random_cd(3)
    assert D2(z, h, k).isclose(D2(z, k, h), 1e-10)


@pytest.mark.parametrize("text", ["z^2 + e1*z*e2", "3*z^4 - e3*z", "e2*z^2*e1 + 1"])
def test_left_antiderivative_inverts_derivative_along_one(text, random_cd):
    f = parse_expression(text, 2)
    G = antiderivative_left(f)
    D = total_derivative(G)
    for _ in range(5):
        z = random_cd(2)
        assert D.apply(z, CdNum.one(2)).isclose(f(z), 1e-10 * max(1.0, abs(f(z))))


def test_left_shapes():
    shapes = left_decompose(parse_expression("-0.25*z^2"))
    assert len(shapes) == 1
    assert shapes[0].coeff == -0.25 and shapes[0].n == 2 and shapes[0].a is None


def test_left_algorithm_rejections():
    with pytest.raises(NotLeftReducible):
        antiderivative_left(parse_expression("conj(z)"))
    with pytest.raises(NegativePowerOne):
        antiderivative_left(Phrase.variable(2) ** -1)


def test_composition_and_arithmetic(random_cd):
    z = random_cd(2)
    square = Phrase.variable(2) ** 2
    shifted = compose_phrase(square, Phrase.variable(2) + CdNum.basis(1, 2))
    assert shifted(z).isclose((z + CdNum.basis(1, 2)) ** 2, 1e-12)
    assert (square * 2.0 - square)(z).isclose(z * z, 1e-12)
    assert Phrase.constant(3.0, 2).is_constant


def test_inverse_terms_format_and_parse_back():
    z = Phrase.variable(2)
    e1 = Phrase.constant(CdNum.basis(1, 2), 2)
    built = z ** -1 * e1 + (z + 1.0) ** -2 * 3.0
    text = format_phrase(built)
    assert "inv(" in text
    reparsed = parse_expression(text, 2)
    assert format_phrase(reparsed) == text
    x = CdNum([0.4, -0.3, 0.2, 0.6])
    assert reparsed(x).isclose(built(x), 1e-12)


def test_inverse_function_in_text():
    p = parse_expression("inv(z)*e2", 2)
    x = CdNum([1.0, 0.5, -0.5, 0.25])
    assert p(x).isclose(cd_inv(x) * CdNum.basis(2, 2), 1e-12)
