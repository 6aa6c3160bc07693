"""Tests for the power-series Cauchy solver"""

import math

import pytest

from src.algebra import CdNum
from src.errors import ShapeMismatch
from src.models import GridSpec
from src.odes import BoundaryData, linear_componentwise_problem, solve_linear
from src.phrase import Phrase, parse_expression
from src.series import (
    CauchyProblem,
    HighOrderSystem,
    cauchy_series_solve,
    estimate_radius,
    reduce_to_first_order,
)


def test_exponential_coefficients():
    problem = CauchyProblem([Phrase.variable(2)], [CdNum.one(2)], 2)
    solution = cauchy_series_solve(problem, order=12)
    for n in range(13):
        assert solution.coefficient(0, n).isclose(1.0 / math.factorial(n), 1e-12)
    assert solution.report.max_residual <= solution.report.tolerance
    assert solution(0, 0.5).isclose(math.exp(0.5), 1e-9)


def test_right_multiplication_by_a_unit_rotates():
    problem = CauchyProblem([parse_expression("z*e1")], [CdNum.one(2)], 2)
    solution = cauchy_series_solve(problem, order=20)
    t = 0.7
    expected = CdNum([math.cos(t), math.sin(t), 0.0, 0.0])
    assert solution(0, t).isclose(expected, 1e-12)


def test_time_dependent_right_hand_side():
    problem = CauchyProblem([lambda state: state.t], [0.0], 2)
    solution = cauchy_series_solve(problem, order=6)
    assert solution.coefficient(0, 2).isclose(0.5, 1e-15)
    assert solution.coefficient(0, 3).isclose(0.0, 1e-15)
    assert math.isinf(solution.radius)


def test_second_order_cosine():
    system = HighOrderSystem([2], [parse_expression("-1*z")], [[1.0, 0.0]], 2)
    problem = reduce_to_first_order(system)
    assert problem.unknowns == 2
    solution = cauchy_series_solve(problem, order=16)
    for t in (0.1, 0.4, 0.8):
        assert solution(0, t).isclose(math.cos(t), 1e-10)
        assert solution(1, t).isclose(-math.sin(t), 1e-10)


def test_third_order_polynomial():
    system = HighOrderSystem([3], [lambda state: 0.0], [[0.0, 0.0, 2.0]], 2)
    solution = cauchy_series_solve(reduce_to_first_order(system), order=8)
    assert solution(0, 1.5).isclose(1.5**2, 1e-12)
    assert solution.coefficient(0, 2).isclose(1.0, 1e-15)


def test_orderings_give_identical_coefficients():
    rotation = CauchyProblem(
        [lambda state: state.u[1], lambda state: -state.u[0] * CdNum.basis(1, 2)],
        [CdNum.one(2), CdNum.basis(2, 2)],
        2,
    )
    forward = cauchy_series_solve(rotation, order=10, ordering="forward")
    backward = cauchy_series_solve(rotation, order=10, ordering="reverse")
    for j in range(2):
        for k in range(11):
            assert forward.coefficient(j, k) == backward.coefficient(j, k)
    with pytest.raises(ValueError):
        cauchy_series_solve(rotation, ordering="sideways")


def test_transport_with_spatial_variable():
    # u_t = u_x with u(0, x) = (x e1)^2 = -x^2
    problem = CauchyProblem([lambda state: state.du[0][0]], [parse_expression("z^2")], 2, n_spatial=1)
    solution = cauchy_series_solve(problem, order=6)
    assert solution(0, 0.3, [0.2]).isclose(-0.25, 1e-12)


def test_series_function_view():
    problem = CauchyProblem([Phrase.variable(2)], [CdNum.one(2)], 2)
    fn = cauchy_series_solve(problem, order=14).series_fn(0)
    assert fn(CdNum.real_number(0.3, 2)).isclose(math.exp(0.3), 1e-12)


def test_shape_checks():
    with pytest.raises(ShapeMismatch):
        CauchyProblem([Phrase.variable(2)], [], 2)
    with pytest.raises(ShapeMismatch):
        reduce_to_first_order(HighOrderSystem([2], [Phrase.variable(2)], [[1.0]], 2))


def test_radius_estimate():
    assert math.isinf(estimate_radius([1.0, 0.0, 0.0]))
    assert estimate_radius([2.0**-k for k in range(13)]) == pytest.approx(2.0)


def test_componentwise_linear_matches_closed_solver():
    eta = CdNum([2.0, 1.0, 0.0, -0.5])
    foot = CdNum([0.0, 0.2, -0.1, 0.3])
    Q = parse_expression("z", 2)
    problem = linear_componentwise_problem(1.0, Q, CdNum.one(2), foot, eta)
    series = cauchy_series_solve(problem, order=16)
    closed = solve_linear(1.0, Q, 1.0, BoundaryData(0.0, eta), level=2, grid=GridSpec(points=5))
    reach = min(0.5 * series.radius, 0.8)
    for t in (0.25 * reach, 0.5 * reach, reach):
        assert series(0, t).isclose(closed(foot + t), 1e-6)
