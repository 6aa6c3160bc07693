"""Solvers for differential equations over Cayley-Dickson algebras"""

from .problem import (
    OdeKind,
    Representation,
    BoundaryData,
    OdeProblem,
    ParametricPair,
    Solution,
    CLOSED_FORM_TOL,
    QUADRATURE_TOL,
    NEWTON_TOL,
)
from .characteristics import Characteristic, trace_characteristic, solve_along, flow
from .omega import OmegaMap, solve_omega
from .residual import sample_grid, verify_residual, verify_parametric, verify_flow_parametric, attach_residual
from .newton import newton_solve, invert
from .first_order import (
    solve_simplest,
    solve_linear,
    solve_separated,
    solve_power_separated,
    solve_homogeneous_ratio,
    solve_reduced,
)
from .bernoulli import solve_bernoulli, solve_generalized_bernoulli, check_commutation
from .implicit import (
    ImplicitResult,
    quadratic_derivative_roots,
    solve_quadratic_in_derivative,
    solve_clairaut,
    solve_lagrange,
    stationary_slopes,
)
from .higher_order import solve_nth_order_iterated
from .reduction import (
    STRATEGIES,
    HigherOrderProblem,
    Reduction,
    reduce_order,
    solve_higher_order,
    higher_order_residual,
)
from .componentwise import collapse_real_combination, linear_componentwise_problem
from .dispatch import SOLVERS, solve_problem

__all__ = [
    "OdeKind",
    "Representation",
    "BoundaryData",
    "OdeProblem",
    "ParametricPair",
    "Solution",
    "CLOSED_FORM_TOL",
    "QUADRATURE_TOL",
    "NEWTON_TOL",
    "Characteristic",
    "trace_characteristic",
    "solve_along",
    "flow",
    "OmegaMap",
    "solve_omega",
    "sample_grid",
    "verify_residual",
    "verify_parametric",
    "verify_flow_parametric",
    "attach_residual",
    "newton_solve",
    "invert",
    "solve_simplest",
    "solve_linear",
    "solve_separated",
    "solve_power_separated",
    "solve_homogeneous_ratio",
    "solve_reduced",
    "solve_bernoulli",
    "solve_generalized_bernoulli",
    "check_commutation",
    "ImplicitResult",
    "quadratic_derivative_roots",
    "solve_quadratic_in_derivative",
    "solve_clairaut",
    "solve_lagrange",
    "stationary_slopes",
    "solve_nth_order_iterated",
    "STRATEGIES",
    "HigherOrderProblem",
    "Reduction",
    "reduce_order",
    "solve_higher_order",
    "higher_order_residual",
    "collapse_real_combination",
    "linear_componentwise_problem",
    "SOLVERS",
    "solve_problem",
]
