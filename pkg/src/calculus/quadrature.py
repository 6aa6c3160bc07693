"""Adaptive composite Gauss-Legendre quadrature for algebra-valued integrands"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Callable, Optional, TypeVar

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..config import Context, get_context
from ..errors import QuadratureNonConvergent

logger = logging.getLogger(__name__)

GAUSS_ORDER = 10

T = TypeVar("T")


@lru_cache(maxsize=16)
def gauss_nodes(order: int = GAUSS_ORDER) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    x, w = leggauss(order)
    return (x + 1.0) * 0.5, w * 0.5


def _norm(value) -> float:
    return float(np.linalg.norm(np.asarray(getattr(value, "coeffs", value), dtype=float)))


def fixed_gauss(fn: Callable[[float], T], a: float, b: float, order: int = GAUSS_ORDER, pieces: int = 1) -> T:
    """Composite rule with ``pieces`` equal subintervals of [a, b]."""
    nodes, weights = gauss_nodes(order)
    width = (b - a) / pieces
    total = None
    for k in range(pieces):
        left = a + k * width
        for x, w in zip(nodes, weights):
            term = fn(left + x * width) * float(w * width)
            total = term if total is None else total + term
    return total


def integrate_interval(
    fn: Callable[[float], T],
    a: float = 0.0,
    b: float = 1.0,
    ctx: Optional[Context] = None,
) -> T:
    """
    ∫_a^b fn(t) dt, doubling the subinterval count until two successive
    estimates differ by less than quad_rtol·(1 + |estimate|).

    Args:
        fn: Integrand returning a CdNum, float or numpy array
        a: Lower limit
        b: Upper limit
        ctx: Numerical context

    Returns:
        The converged estimate

    Raises:
        QuadratureNonConvergent: no convergence within quad_max_subdivisions pieces
    """
    ctx = get_context(ctx)
    pieces = 1
    previous = fixed_gauss(fn, a, b, pieces=pieces)
    change = float("inf")
    while pieces < ctx.quad_max_subdivisions:
        pieces *= 2
        current = fixed_gauss(fn, a, b, pieces=pieces)
        change = _norm(current - previous)
        if change <= ctx.quad_rtol * (1.0 + _norm(current)):
            logger.debug("quadrature converged with %d pieces (change %.3e)", pieces, change)
            return current
        previous = current
    raise QuadratureNonConvergent(
        f"no convergence on [{a}, {b}] after {pieces} subintervals (last change {change:.3e})"
    )
