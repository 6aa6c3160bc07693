"""Derivatives, line integrals, 1-forms and integrating factors"""

from ..algebra import LinOpR, Path
from .quadrature import integrate_interval, fixed_gauss, gauss_nodes, GAUSS_ORDER
from .series_fn import SeriesFn, exp_series, sin_series, cos_series
from .derivative import frechet_derivative, finite_difference_derivative, directional_fd, fd_step, Evaluatable
from .integral import IntegralMode, line_integral, hat_operator, integrate_hat, integrate_form
from .forms import (
    Form1,
    Potential,
    check_exact,
    exactness_defect,
    component_coefficients,
    component_defect,
    reconstruct_potential,
)
from .factor import (
    Dependence,
    IntegratingFactor,
    integrating_factor,
    factor_from_integrand,
    x_integrand,
    y_integrand,
)

__all__ = [
    "LinOpR",
    "Path",
    "integrate_interval",
    "fixed_gauss",
    "gauss_nodes",
    "GAUSS_ORDER",
    "SeriesFn",
    "exp_series",
    "sin_series",
    "cos_series",
    "frechet_derivative",
    "finite_difference_derivative",
    "directional_fd",
    "fd_step",
    "Evaluatable",
    "IntegralMode",
    "line_integral",
    "hat_operator",
    "integrate_hat",
    "integrate_form",
    "Form1",
    "Potential",
    "check_exact",
    "exactness_defect",
    "component_coefficients",
    "component_defect",
    "reconstruct_potential",
    "Dependence",
    "IntegratingFactor",
    "integrating_factor",
    "factor_from_integrand",
    "x_integrand",
    "y_integrand",
]
