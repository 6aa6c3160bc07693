"""Power-series Cauchy solver"""

from .taylor import TaylorSeries
from .cauchy import (
    CauchyState,
    CauchyProblem,
    CauchySolution,
    HighOrderState,
    HighOrderSystem,
    cauchy_series_solve,
    reduce_to_first_order,
    estimate_radius,
    majorant_radius,
    series_residual,
)

__all__ = [
    "TaylorSeries",
    "CauchyState",
    "CauchyProblem",
    "CauchySolution",
    "HighOrderState",
    "HighOrderSystem",
    "cauchy_series_solve",
    "reduce_to_first_order",
    "estimate_radius",
    "majorant_radius",
    "series_residual",
]
