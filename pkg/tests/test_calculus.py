"""Tests for line integrals, 1-forms, potentials and integrating factors"""

import math

import pytest

from conftest import polynomial_potential, trig_potential
from src.algebra import CdNum, LinOpR, Path
from src.calculus import (
    Dependence,
    Form1,
    IntegralMode,
    check_exact,
    cos_series,
    exp_series,
    fixed_gauss,
    frechet_derivative,
    integrate_interval,
    integrating_factor,
    line_integral,
    reconstruct_potential,
    sin_series,
)
from src.errors import NotExact, NotIntegrable, NotQuaternion
from src.functions import cd_exp
from src.phrase import Phrase, parse_expression


def _path(*points):
    return Path.polyline([CdNum(p) for p in points])


def test_integral_of_identity_on_unit_interval():
    value = line_integral(parse_expression("z"), Path.straight(CdNum.zero(2), CdNum.one(2)))
    assert value.isclose(0.5, 1e-15)


@pytest.mark.parametrize("text", ["z", "z^2 + e1*z*e2", "e2*z^3*e1 - 4", "(e1*z)*e3*z"])
def test_symbolic_and_quadrature_agree(text):
    f = parse_expression(text, 2)
    path = _path([0.1, 0.0, 0.2, 0.0], [0.5, 0.4, -0.3, 0.2], [1.0, -0.2, 0.1, 0.6])
    symbolic = line_integral(f, path, IntegralMode.SYMBOLIC)
    quadrature = line_integral(f, path, IntegralMode.QUADRATURE)
    assert quadrature.isclose(symbolic, 1e-9 * max(1.0, abs(symbolic)))


def test_path_independence_and_additivity():
    f = parse_expression("z^2*e1 + e2*z", 3)
    a = CdNum([0.0] * 8)
    m = CdNum([0.3, 0.1, 0.0, 0.0, 0.5, 0.0, 0.0, -0.2])
    b = CdNum([1.0, 0.0, 0.2, 0.0, 0.0, 0.3, 0.0, 0.0])
    direct = line_integral(f, Path.straight(a, b), IntegralMode.QUADRATURE)
    via = line_integral(f, Path.polyline([a, m, b]), IntegralMode.QUADRATURE)
    split = line_integral(f, Path.straight(a, m), IntegralMode.QUADRATURE) + line_integral(
        f, Path.straight(m, b), IntegralMode.QUADRATURE
    )
    assert via.isclose(direct, 1e-9)
    assert split.isclose(via, 1e-9)


def test_reciprocal_around_the_origin():
    f = Phrase.variable(3) ** -1
    one, e1 = CdNum.one(3), CdNum.basis(1, 3)
    loop = Path.polyline([one, e1, -one, -e1, one])
    expected = e1 * (2.0 * math.pi)
    assert line_integral(f, loop, IntegralMode.SYMBOLIC).isclose(expected, 1e-8)
    assert line_integral(f, loop, IntegralMode.QUADRATURE).isclose(expected, 1e-7)


def test_symbolic_rejects_non_reducible_integrands():
    path = Path.straight(CdNum.zero(2), CdNum.one(2))
    with pytest.raises(NotIntegrable):
        line_integral(parse_expression("conj(z)"), path, IntegralMode.SYMBOLIC)
    with pytest.raises(NotIntegrable):
        line_integral(lambda z: z, path, IntegralMode.SYMBOLIC)
    assert line_integral(lambda z: z, path, IntegralMode.QUADRATURE).isclose(0.5, 1e-12)


def test_series_integrands():
    path = Path.straight(CdNum.zero(2), CdNum([0.3, 0.2, -0.1, 0.4]))
    end = path.end
    value = line_integral(exp_series(order=30, level=2), path, IntegralMode.SYMBOLIC)
    assert value.isclose(cd_exp(end) - 1.0, 1e-10)
    assert line_integral(exp_series(order=30, level=2), path, IntegralMode.QUADRATURE).isclose(value, 1e-9)


def test_series_functions_on_the_real_line():
    assert sin_series()(CdNum.real_number(0.4, 0)).isclose(math.sin(0.4), 1e-14)
    assert cos_series(center=1.0)(CdNum.real_number(1.3, 0)).isclose(math.cos(1.3), 1e-14)
    z, h = CdNum([0.2, 0.1, 0.0, -0.3]), CdNum([0.0, 1.0, 0.5, 0.0])
    assert exp_series(level=2).apply_derivative(z, h).isclose(frechet_derivative(exp_series(level=2), z).apply(h), 1e-7)


def test_gauss_rules():
    assert fixed_gauss(lambda t: t**19, 0.0, 1.0) == pytest.approx(1.0 / 20.0, rel=1e-13)
    assert integrate_interval(math.cos, 0.0, math.pi / 2) == pytest.approx(1.0, rel=1e-12)


def test_polynomial_form_is_exact_and_potential_recovered(polynomial_form, rng):
    report = check_exact(polynomial_form, samples=5, componentwise=True)
    assert report.exact
    assert report.component_defect < 1e-5
    F = reconstruct_potential(polynomial_form)
    for _ in range(5):
        x, y = polynomial_form.sample(rng)
        assert F(x, y).isclose(polynomial_potential(x, y), 1e-6)


def test_slot_operator_form_over_quaternions(rng):
    # A and B written with the slots I1 (dx) and I2 (dy) between the factors
    left, right = LinOpR.left_mul, LinOpR.right_mul

    def A(x, y):
        s = x * x + x * y + y * x
        return left(s) + right(s) + left(x) @ right(x) + left(x) @ right(y) + left(y) @ right(x)

    def B(x, y):
        d = x * x - y * y
        return left(d) + right(d) + left(x) @ right(x) - left(y) @ right(y)

    form = Form1(A, B, 2, radius=0.5)
    assert check_exact(form, samples=5).exact
    F = reconstruct_potential(form)
    x0, y0 = form.sample(rng)
    for _ in range(20):
        x, y = form.sample(rng)
        expected = polynomial_potential(x, y) - polynomial_potential(x0, y0)
        assert (F(x, y) - F(x0, y0)).isclose(expected, 1e-6)


def test_trig_form_is_exact_and_potential_recovered(trig_form, rng):
    assert check_exact(trig_form, samples=5).exact
    F = reconstruct_potential(trig_form)
    origin = CdNum.zero(3)
    assert F(origin, origin).isclose(0.0, 1e-15)
    for _ in range(5):
        x, y = trig_form.sample(rng)
        assert F(x, y).isclose(trig_potential(x, y), 1e-6)


def test_non_exact_form():
    # y dx - x dy
    form = Form1(
        lambda x, y: LinOpR.left_mul(y),
        lambda x, y: LinOpR.left_mul(-x),
        2,
    )
    report = check_exact(form, samples=3)
    assert not report.exact
    with pytest.raises(NotExact):
        reconstruct_potential(form)


def _damped_form() -> Form1:
    """e^{-Re x}(dx + dy) over quaternions."""

    def damping(x, y):
        return LinOpR.left_mul(CdNum.real_number(math.exp(-x.real), 2))

    return Form1(damping, damping, 2)


def test_integrating_factor_in_x():
    form = _damped_form()
    assert not check_exact(form, samples=3).exact
    factor = integrating_factor(form, Dependence.X_ONLY)
    assert factor.verification.exact
    assert factor.consistent
    x, y = CdNum([0.2, 0.1, 0.0, -0.1]), CdNum([0.1, 0.0, 0.3, 0.0])
    assert factor(x, y).isclose(math.exp(0.2), 1e-6)


def test_integrating_factor_needs_quaternions(polynomial_form):
    with pytest.raises(NotQuaternion):
        integrating_factor(polynomial_form)
