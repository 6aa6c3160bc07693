"""Tests for the first-order, implicit and higher-order solvers"""

import math

import pytest

from src.algebra import CdNum, cd_inv
from src.calculus import directional_fd
from src.errors import (
    AnsatzViolation,
    InvalidParameter,
    NonAnalyticInput,
    NonRealCoefficient,
    ShapeMismatch,
    ZeroVectorField,
)
from src.functions import RootKind, cd_exp
from src.models import GridSpec
from src.odes import (
    CLOSED_FORM_TOL,
    BoundaryData,
    HigherOrderProblem,
    OdeKind,
    OdeProblem,
    Representation,
    Solution,
    collapse_real_combination,
    quadratic_derivative_roots,
    reduce_order,
    sample_grid,
    solve_bernoulli,
    solve_clairaut,
    solve_generalized_bernoulli,
    solve_higher_order,
    solve_homogeneous_ratio,
    solve_lagrange,
    solve_linear,
    solve_nth_order_iterated,
    solve_omega,
    solve_power_separated,
    solve_problem,
    solve_separated,
    solve_simplest,
    stationary_slopes,
    verify_residual,
)
from src.phrase import Phrase, parse_expression

SMALL = GridSpec(points=8)


def test_simplest_closed_form():
    f = parse_expression("z^2 + e1*z*e2")
    solution = solve_simplest(f, grid=SMALL)
    assert solution.representation is Representation.CLOSED_FORM
    assert solution.verified
    x = CdNum([0.4, 0.1, -0.3, 0.2])
    assert directional_fd(solution, x, CdNum.one(2), stencil=5).isclose(f(x), 1e-7)
    assert solution(x.imag).isclose(0.0, 1e-12)


def test_simplest_with_boundary_data():
    eta = parse_expression("z*e3")
    solution = solve_simplest(parse_expression("1"), bd=BoundaryData(0.0, eta), grid=SMALL)
    x = CdNum([0.7, 0.2, 0.0, -0.1])
    assert solution(x).isclose(x.imag * CdNum.basis(3, 2) + 0.7, 1e-10)


def test_linear_decay():
    eta = CdNum([2.0, 1.0, 0.0, 0.0])
    solution = solve_linear(1.0, 0.0, 1.0, BoundaryData(0.0, eta), grid=SMALL)
    assert solution.verified
    x = CdNum([0.5, 0.3, -0.2, 0.1])
    assert solution(x).isclose(eta * math.exp(-0.5), 1e-10)


def test_linear_with_source_is_grid_backed():
    solution = solve_linear(1.0, parse_expression("z"), 1.0, BoundaryData(0.0, 1.0), grid=SMALL)
    assert solution.representation is Representation.GRID_BACKED
    assert solution.verified


def test_linear_rejects_non_real_coefficient():
    with pytest.raises(NonRealCoefficient):
        solve_linear(CdNum.basis(1, 2), 0.0, grid=SMALL)


def test_separated_square_root():
    # y·P − 1 = 0 with y = 1 on the boundary: y = (1 + 2 Re x)^(1/2)
    solution = solve_separated(parse_expression("z"), -1.0, bd=BoundaryData(0.0, 1.0), grid=SMALL)
    x = CdNum([0.5, 0.3, 0.0, 0.0])
    assert solution(x).isclose(math.sqrt(2.0), 1e-6)
    assert solution.verified


def test_homogeneous_right_ratio():
    eta = CdNum([2.0, 0.0, 1.0, 0.0])
    bd = BoundaryData(1.0, eta)
    solution = solve_homogeneous_ratio(parse_expression("z"), 1.0, "right", bd, grid=SMALL)
    x = CdNum([1.5, 0.2, 0.0, 0.0])
    foot = CdNum([1.0, 0.2, 0.0, 0.0])
    assert solution(x).isclose(eta * cd_inv(foot) * x, 1e-6)
    with pytest.raises(ValueError):
        solve_homogeneous_ratio(parse_expression("z"), side="middle")


def test_homogeneous_left_ratio():
    eta = CdNum([2.0, 0.0, 1.0, 0.0])
    bd = BoundaryData(1.0, eta)
    solution = solve_homogeneous_ratio(parse_expression("z"), 1.0, "left", bd, grid=SMALL)
    x = CdNum([1.5, 0.2, 0.0, 0.0])
    foot = CdNum([1.0, 0.2, 0.0, 0.0])
    assert solution(x).isclose(x * cd_inv(foot) * eta, 1e-6)
    assert solution.residual.max_residual < 1e-5


def test_power_separated_reciprocal():
    # y' + y^2 = 0 with y = 1 on the boundary
    f = parse_expression("1", 2)
    solution = solve_power_separated(f, 1.0, 2.0, bd=BoundaryData(0.0, 1.0), grid=SMALL)
    x = CdNum([0.5, 0.1, 0.0, -0.2])
    assert solution(x).isclose(1.0 / 1.5, 1e-6)
    assert solution.kind is OdeKind.POWER_SEPARATED
    assert solution.verified


def test_bernoulli_logistic():
    # y' + y = y^2, y = 1/2 on the boundary
    solution = solve_bernoulli(1.0, 1.0, 2.0, bd=BoundaryData(0.0, 0.5), grid=SMALL)
    x = CdNum([0.4, 0.0, 0.0, 0.1])
    assert solution(x).isclose(1.0 / (1.0 + math.exp(0.4)), 1e-7)
    assert solution.verified


def test_bernoulli_degenerate_exponents():
    bd = BoundaryData(0.0, CdNum([1.0, 0.5, 0.0, 0.0]))
    as_linear = solve_bernoulli(1.0, 0.0, 0.0, bd=bd, grid=SMALL)
    linear = solve_linear(1.0, 0.0, 1.0, bd, grid=SMALL)
    x = CdNum([0.3, 0.2, 0.1, 0.0])
    assert as_linear(x).isclose(linear(x), 1e-10)
    assert as_linear.kind is OdeKind.BERNOULLI
    with pytest.raises(InvalidParameter):
        solve_bernoulli(1.0, 1.0, 1.0)


def test_generalized_bernoulli_reduces_to_bernoulli():
    bd = BoundaryData(0.0, 0.5)
    general = solve_generalized_bernoulli(None, 1.0, 1.0, 1.0, 2.0, bd=bd, grid=SMALL)
    logistic = solve_bernoulli(1.0, 1.0, 2.0, bd=bd, grid=SMALL)
    x = CdNum([0.4, 0.0, 0.0, 0.1])
    assert general(x).isclose(logistic(x), 1e-10)
    assert general.kind is OdeKind.GENERALIZED_BERNOULLI
    assert general.verified


def test_generalized_bernoulli_without_source():
    # y' + y^2 = 0: s = 0 goes through the primitive of y^-2
    f = parse_expression("1", 2)
    solution = solve_generalized_bernoulli(f, 1.0, 0.0, 2.0, 3.0, bd=BoundaryData(0.0, 1.0), grid=SMALL)
    x = CdNum([0.5, 0.0, 0.3, 0.0])
    assert solution(x).isclose(1.0 / 1.5, 1e-6)
    assert solution.verified


def test_generalized_bernoulli_along_characteristic():
    # y y' + y^2 = 1, y = 1/2 on the boundary: y^2 = 1 - 0.75 exp(-2x)
    solution = solve_generalized_bernoulli(
        parse_expression("z"), 1.0, 1.0, 2.0, 0.0, bd=BoundaryData(0.0, 0.5), grid=SMALL
    )
    x = CdNum([0.3, 0.1, 0.0, 0.0])
    assert solution(x).isclose(math.sqrt(1.0 - 0.75 * math.exp(-0.6)), 1e-6)
    assert solution.representation is Representation.GRID_BACKED
    with pytest.raises(InvalidParameter):
        solve_generalized_bernoulli(None, 1.0, 1.0, 2.0, 2.0)


def test_quadratic_roots(random_cd):
    b, c = random_cd(2), random_cd(2)
    roots = quadratic_derivative_roots(b, c)
    assert roots.kind is RootKind.POINT_PAIR
    for lam in roots.points:
        assert (lam * lam + b * lam + lam * b + c).isclose(0.0, 1e-9)


def test_quadratic_roots_sphere(rng):
    roots = quadratic_derivative_roots(CdNum.zero(2), CdNum.real_number(4.0, 2))
    assert roots.kind is RootKind.SPHERE
    for lam in roots.sample(rng, count=5):
        assert (lam * lam).isclose(-4.0, 1e-10)


def test_clairaut_envelope():
    eta = parse_expression("-0.25*z^2", 3)
    result = solve_clairaut(eta, phi=2.0, level=3, grid=GridSpec(points=10))
    assert result.general.verified
    envelope = [s for s in result.special if s.representation is Representation.CLOSED_FORM]
    assert len(envelope) == 1
    assert envelope[0].residual.max_residual < 1e-9
    x = CdNum.basis(5, 3) + 0.3
    assert envelope[0](x).isclose(x * x, 1e-12)


def test_clairaut_in_flow_variable():
    eta = parse_expression("-0.25*z^2", 2)
    result = solve_clairaut(eta, phi=2.0, h=parse_expression("z", 2), level=2, grid=SMALL)
    assert result.general.representation is Representation.PARAMETRIC
    assert result.general.verified
    assert len(result.special) == 1
    assert result.special[0].verified
    t = CdNum([1.2, 0.1, 0.0, -0.2])
    x, y = result.general.parametric(t)
    assert x.isclose(cd_exp(t - 1.0), 1e-12)
    assert y.isclose(t * 2.0 - 1.0, 1e-12)


def test_clairaut_flow_variable_rejections():
    eta = parse_expression("z^2")
    with pytest.raises(ZeroVectorField):
        solve_clairaut(eta, h=parse_expression("z"), center=0.0)
    with pytest.raises(NonAnalyticInput):
        solve_clairaut(eta, h=lambda x: x * 2.0)


def test_omega_unit_field_is_identity():
    alpha = CdNum([0.5, 0.2, 0.0, 0.0])
    omega = solve_omega(1.0, alpha)
    assert omega.is_closed_form
    x = CdNum([1.3, -0.4, 0.7, 0.1])
    assert omega(x).isclose(x, 1e-15)


def test_omega_linear_field_is_exponential():
    omega = solve_omega(parse_expression("z", 2), CdNum.one(2))
    assert omega.is_closed_form
    for x in (CdNum([1.4, 0.3, -0.2, 0.1]), CdNum([0.2, 0.0, 0.5, 0.0])):
        assert omega(x).isclose(cd_exp(x - 1.0), 1e-12)
    x = CdNum([1.2, 0.1, 0.1, 0.0])
    assert omega.series(x).isclose(omega(x), 1e-9)


def test_omega_power_field():
    # z^2 with alpha = e1 gives the (-x)^-1 branch of [(1 - n)x]^{1/(1 - n)}
    e1 = CdNum.basis(1, 2)
    omega = solve_omega(parse_expression("z^2", 2), e1)
    assert omega.is_closed_form
    x = CdNum([0.3, 1.1, 0.2, 0.0])
    assert omega(x).isclose(cd_inv(-x), 1e-12)
    one = CdNum.one(2)
    slope = directional_fd(omega, x, one, stencil=5)
    assert slope.isclose(omega(x) * omega(x), 1e-7)


def test_omega_series_for_unrecognized_field():
    h = parse_expression("z^2 + 1", 2)
    omega = solve_omega(h, CdNum.real_number(0.0, 2), order=24)
    assert not omega.is_closed_form
    x = CdNum([0.3, 0.0, 0.0, 0.0])
    assert omega(x).real == pytest.approx(math.tan(0.3), abs=1e-9)
    with pytest.raises(ZeroVectorField):
        solve_omega(parse_expression("z", 2), CdNum.zero(2))


def test_lagrange_square_root_family():
    result = solve_lagrange(
        f=parse_expression("z^2"), eta=parse_expression("z^2"), p0=2.0, x0=0.0, grid=GridSpec(points=6)
    )
    family = next(s for s in result.special if s.representation is Representation.CLOSED_FORM and "^(1/2)" in s.expression)
    assert family.verified
    assert family(CdNum.real_number(3.0, 2)).isclose(9.0, 1e-10)
    notes = [note for s in result.special for note in s.branch_notes]
    assert any("singular" in note for note in notes)
    assert any("particular" in note for note in notes)


def test_lagrange_rejections():
    with pytest.raises(AnsatzViolation):
        solve_lagrange(f=parse_expression("z^2"), commuting_ansatz=False)
    with pytest.raises(InvalidParameter):
        solve_lagrange(f=parse_expression("z^2"), s=parse_expression("z"))


def test_stationary_slopes():
    assert stationary_slopes(parse_expression("z^2"), 1.0) == pytest.approx([0.0, 1.0])
    assert stationary_slopes(lambda p: p, 1.0) == []


def test_nth_order_closed_form():
    solution = solve_nth_order_iterated(2, Phrase.constant(2.0, 2), grid=SMALL)
    assert solution.representation is Representation.CLOSED_FORM
    assert solution.verified
    x = CdNum([0.6, -0.4, 0.2, 0.5])
    assert solution(x).isclose(0.36, 1e-10)


def test_nth_order_with_boundary_slopes():
    solution = solve_nth_order_iterated(3, Phrase.constant(0.0, 2), etas=[1.0, 2.0, 4.0], grid=SMALL)
    x = CdNum([0.5, 0.1, 0.0, 0.0])
    assert solution(x).isclose(1.0 + 2.0 * 0.5 + 2.0 * 0.25, 1e-10)


def test_missing_y_reduction():
    problem = HigherOrderProblem(2, lambda x, ds: CdNum.real_number(2.0, 2), uses=frozenset({1}))
    reduction = reduce_order(problem, "missing_y")
    assert reduction.reduced.order == 1
    solution = solve_higher_order(problem, "missing_y", grid=GridSpec(points=4))
    x = CdNum([0.5, 0.2, -0.1, 0.0])
    assert solution(x).isclose(0.25, 1e-6)


def test_top_two_reduction():
    # y'' = -y' with y = 0, y' = 1 on the boundary
    problem = HigherOrderProblem(2, lambda x, ds: -ds[1], etas=[0.0, 1.0], uses=frozenset({1}), depends_on_x=False)
    solution = solve_higher_order(problem, "top_two", grid=GridSpec(points=4))
    x = CdNum([0.7, 0.0, 0.3, 0.0])
    assert solution(x).isclose(1.0 - math.exp(-0.7), 1e-6)


def test_autonomous_reduction():
    # y'' = y' with y = 0, y' = 1: p(y) = 1 + y and y = exp(x) - 1
    problem = HigherOrderProblem(2, lambda x, ds: ds[1], etas=[0.0, 1.0], depends_on_x=False)
    reduction = reduce_order(problem, "autonomous")
    assert reduction.reduced.alpha0 == 0.0
    solution = solve_higher_order(problem, "autonomous", grid=GridSpec(points=4))
    x = CdNum([0.6, 0.1, 0.0, 0.2])
    assert solution(x).isclose(math.exp(0.6) - 1.0, 1e-6)
    assert solution.residual.max_residual < 1e-4


def test_energy_reduction():
    # y'' = y with y = y' = 1: (y')^2 = y^2
    problem = HigherOrderProblem(2, lambda x, ds: ds[0], etas=[1.0, 1.0], uses=frozenset({0}), depends_on_x=False)
    reduction = reduce_order(problem, "energy")
    assert reduction.first_integral(CdNum.real_number(2.0, 2)).isclose(2.0, 1e-9)
    solution = solve_higher_order(problem, "energy", grid=GridSpec(points=4))
    x = CdNum([0.5, 0.0, -0.2, 0.1])
    assert solution(x).isclose(math.exp(0.5), 1e-6)
    assert solution.residual.max_residual < 1e-4


def test_product_reduction():
    # y'' + y' + y'^2 = 0 with y = 0, y' = 1: y = ln(2 - exp(-x))
    problem = HigherOrderProblem(
        2,
        lambda x, ds: -ds[1] - ds[1] * ds[1],
        etas=[0.0, 1.0],
        ingredients={"f": 1.0, "g": 1.0},
    )
    reduction = reduce_order(problem, "product")
    assert reduction.factors["u"](CdNum.real_number(0.5, 2)).isclose(math.exp(-0.5), 1e-9)
    assert reduction.factors["v"](CdNum.real_number(0.3, 2)).isclose(math.exp(-0.3), 1e-9)
    solution = solve_higher_order(problem, "product", grid=GridSpec(points=4))
    x = CdNum([0.5, 0.2, 0.0, 0.0])
    assert solution(x).isclose(math.log(2.0 - math.exp(-0.5)), 1e-6)
    assert solution.residual.max_residual < 1e-4


def test_reduction_shape_checks():
    with_x = HigherOrderProblem(2, lambda x, ds: ds[0] * x, etas=[1.0, 1.0])
    with pytest.raises(ShapeMismatch):
        reduce_order(with_x, "energy")
    with pytest.raises(ShapeMismatch):
        reduce_order(with_x, "missing_y")
    with pytest.raises(ValueError):
        reduce_order(with_x, "guess")
    with pytest.raises(ShapeMismatch):
        HigherOrderProblem(0, lambda x, ds: x)


def test_collapse_real_combination():
    e1, e2 = CdNum.basis(1, 2), CdNum.basis(2, 2)
    assert collapse_real_combination([(2.0, e1), (3.0, e2)]).isclose(e1 * 2.0 + e2 * 3.0, 1e-15)

    combined = collapse_real_combination([(2.0, parse_expression("z")), (1.0, e1)])
    assert isinstance(combined, Phrase)
    x = CdNum([0.1, 0.2, 0.3, 0.4])
    assert combined(x).isclose(x * 2.0 + e1, 1e-12)

    with pytest.raises(NonRealCoefficient):
        collapse_real_combination([(parse_expression("z"), e1)])


def test_residual_catches_a_wrong_solution():
    eta = CdNum([1.0, 0.0, 0.5, 0.0])
    bd = BoundaryData(0.0, eta)
    good = solve_linear(1.0, 0.0, 1.0, bd, grid=SMALL)
    problem = OdeProblem(OdeKind.LINEAR, 2, {"b": 1.0, "Q": 0.0, "h": 1.0}, boundary=bd)
    bad = Solution(OdeKind.LINEAR, Representation.GRID_BACKED, lambda x: good(x) + 0.01, CLOSED_FORM_TOL)
    report = verify_residual(problem, bad, sample_grid(2, grid=SMALL))
    assert report.max_residual == pytest.approx(0.01, rel=1e-3)
    assert not report.passed


def test_residual_with_no_evaluated_points_fails():
    problem = OdeProblem(OdeKind.LINEAR, 2, {"b": 1.0, "Q": 0.0, "h": 1.0})
    blowup = Solution(OdeKind.LINEAR, Representation.GRID_BACKED, lambda x: CdNum.real_number(math.inf, 2), CLOSED_FORM_TOL)
    report = verify_residual(problem, blowup, sample_grid(2, grid=SMALL))
    assert report.points == []
    assert report.max_residual == 0.0
    assert len(report.failures) == SMALL.points
    assert not report.passed


def test_dispatch():
    problem = OdeProblem(OdeKind.SIMPLEST, 2, {"f": parse_expression("z^2")})
    result = solve_problem(problem, SMALL)
    assert result.general.verified
    assert result.special == []
    with pytest.raises(InvalidParameter):
        solve_problem(OdeProblem(OdeKind.REDUCED, 2, {"G": lambda x, y: y}), SMALL)
