"""Power-series solution of first-order Cauchy problems over A_r"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from ..algebra import CdNum
from ..calculus import SeriesFn
from ..config import Context, get_context
from ..errors import NonAnalyticInput, RecursionBlowup, ShapeMismatch
from ..models import SeriesReport
from ..phrase import Phrase
from .taylor import TaylorSeries

logger = logging.getLogger(__name__)

MAX_SPATIAL = 2
MIN_RADIUS = 1e-6


@dataclass
class CauchyState:
    """
    Arguments handed to a right-hand side: the evolution variable ``t``,
    spatial coordinates ``x``, unknowns ``u`` and their spatial partials
    ``du[j][i]`` = ∂u_j/∂x_{i+1}.
    """

    t: TaylorSeries
    x: List[TaylorSeries]
    u: List[TaylorSeries]
    du: List[List[TaylorSeries]]


Rhs = Union[Phrase, Callable[[CauchyState], Union[TaylorSeries, CdNum, float]]]
Initial = Union[CdNum, float, Phrase, Callable[[List[TaylorSeries]], Union[TaylorSeries, CdNum]]]


@dataclass
class CauchyProblem:
    """
    ∂u_j/∂t = F_j(t, x, u, ∂u/∂x), u_j(t0, x) = φ_j(x).

    A Phrase right-hand side is autonomous: F_j = phrase(u_j). A Phrase
    initial value is read as a function of the first spatial coordinate
    placed on the i_1 axis.
    """

    rhs: Sequence[Rhs]
    initial: Sequence[Initial]
    level: int
    n_spatial: int = 0
    t0: float = 0.0
    x0: Sequence[float] = ()

    def __post_init__(self):
        if len(self.rhs) != len(self.initial):
            raise ShapeMismatch(f"{len(self.rhs)} right-hand sides for {len(self.initial)} initial values")
        if not 0 <= self.n_spatial <= MAX_SPATIAL:
            raise ShapeMismatch(f"at most {MAX_SPATIAL} spatial variables are supported, got {self.n_spatial}")
        if not self.x0:
            self.x0 = tuple([0.0] * self.n_spatial)

    @property
    def unknowns(self) -> int:
        return len(self.rhs)


@dataclass
class CauchySolution:
    """Truncated series u_j(t, x) around (t0, x0)."""

    problem: CauchyProblem
    series: List[TaylorSeries]
    radius: float
    report: SeriesReport
    notes: List[str] = field(default_factory=list)

    def __call__(self, j: int, t: float, x: Sequence[float] = ()) -> CdNum:
        center = [self.problem.t0] + list(self.problem.x0)
        return self.series[j].evaluate([t] + list(x), center)

    def series_fn(self, j: int, x: Sequence[float] = ()) -> SeriesFn:
        """u_j(·, x) as a one-variable series in t − t0."""
        s = self.series[j]
        offsets = [float(a) - float(b) for a, b in zip(x, self.problem.x0)]
        coeffs = []
        for k in range(s.order + 1):
            total = np.zeros(1 << s.level)
            spatial = s.coeffs[k]
            for idx in np.ndindex(*spatial.shape[:-1]):
                if k + sum(idx) > s.order:
                    continue
                weight = math.prod(o ** i for o, i in zip(offsets, idx))
                total += spatial[idx] * weight
            coeffs.append(CdNum(total))
        center = CdNum.real_number(self.problem.t0, s.level)
        return SeriesFn.from_cd_taylor(coeffs, center, self.radius, name=f"u{j}")

    def coefficient(self, j: int, k: int) -> CdNum:
        """Coefficient of (t − t0)^k at the spatial expansion point."""
        return CdNum(self.series[j].coeffs[(k,) + (0,) * self.problem.n_spatial].copy())


def _state(problem: CauchyProblem, unknowns: List[TaylorSeries], order: int) -> CauchyState:
    nvars = 1 + problem.n_spatial
    level = problem.level
    t = TaylorSeries.variable(0, level, order, nvars, problem.t0)
    x = [TaylorSeries.variable(i + 1, level, order, nvars, problem.x0[i]) for i in range(problem.n_spatial)]
    du = [[u.partial(i + 1) for i in range(problem.n_spatial)] for u in unknowns]
    return CauchyState(t, x, unknowns, du)


def _apply_rhs(rhs: Rhs, state: CauchyState, j: int, template: TaylorSeries) -> TaylorSeries:
    if isinstance(rhs, Phrase):
        value = rhs(state.u[j])
    else:
        value = rhs(state)
    if isinstance(value, TaylorSeries):
        return value
    if isinstance(value, (CdNum, int, float)):
        return template * 0.0 + value
    raise NonAnalyticInput(f"right-hand side {j} returned {type(value).__name__}")


def _initial_series(initial: Initial, problem: CauchyProblem, order: int) -> TaylorSeries:
    nvars = 1 + problem.n_spatial
    level = problem.level
    if isinstance(initial, (CdNum, int, float)):
        return TaylorSeries.constant(initial, level, order, nvars)
    x = [TaylorSeries.variable(i + 1, level, order, nvars, problem.x0[i]) for i in range(problem.n_spatial)]
    if isinstance(initial, Phrase):
        if not x:
            return TaylorSeries.constant(initial(CdNum.zero(level)), level, order, nvars)
        return initial(x[0] * CdNum.basis(1, level))
    value = initial(x)
    if isinstance(value, TaylorSeries):
        if np.any(value.coeffs[1:]):
            raise NonAnalyticInput("initial data must not depend on t")
        return value
    return TaylorSeries.constant(value, level, order, nvars)


def estimate_radius(norms: Sequence[float]) -> float:
    """Ratio-test radius (c_{K0}/c_K)^{1/(K−K0)} over the upper half of the coefficients."""
    nonzero = [(k, c) for k, c in enumerate(norms) if c > 1e-300 and k > 0]
    if len(nonzero) < 2:
        return math.inf
    last_k = len(norms) - 1
    if norms[last_k] <= 1e-14 * max(norms) and norms[last_k - 1] <= 1e-14 * max(norms):
        return math.inf
    upper = [(k, c) for k, c in nonzero if k >= last_k // 2] or nonzero
    (k0, c0), (k1, c1) = upper[0], upper[-1]
    if k1 == k0:
        return math.inf
    return (c0 / c1) ** (1.0 / (k1 - k0))


def majorant_radius(problem: CauchyProblem, initial_values: Sequence[CdNum], ball: float = 1.0, samples: int = 16) -> float:
    """Diagnostic b/M with M = max |F| over a ball of radius b around the initial values."""
    rng = np.random.default_rng(0)
    nvars = 1 + problem.n_spatial
    worst = 0.0
    for _ in range(samples):
        unknowns = []
        for value in initial_values:
            direction = rng.normal(size=1 << problem.level)
            direction *= ball / np.linalg.norm(direction)
            unknowns.append(TaylorSeries.constant(value + CdNum(direction), problem.level, 0, nvars))
        state = _state(problem, unknowns, 0)
        for j, rhs in enumerate(problem.rhs):
            value = _apply_rhs(rhs, state, j, unknowns[j])
            worst = max(worst, float(np.linalg.norm(value.coeffs)))
    return math.inf if worst == 0.0 else ball / worst


def cauchy_series_solve(
    problem: CauchyProblem,
    order: int = 12,
    ordering: str = "forward",
    ctx: Optional[Context] = None,
) -> CauchySolution:
    """
    Expansion coefficients by induction on the power of t − t0.

    The substitution w_j = u_j − φ_j gives zero initial data; the degree-(k+1)
    slice of w_j is F_j's degree-k slice divided by k+1, computed from slices
    of degree <= k only.

    Args:
        problem: The Cauchy problem
        order: Truncation order in t and total degree
        ordering: "forward" or "reverse" order of resolving the unknowns
        ctx: Numerical context

    Returns:
        CauchySolution with the series, radius estimate and report

    Raises:
        RecursionBlowup: non-finite coefficients or a radius below 1e-6
        NonAnalyticInput: a right-hand side returned something that is not a series
    """
    ctx = get_context(ctx)
    nvars = 1 + problem.n_spatial
    base = [_initial_series(phi, problem, order) for phi in problem.initial]
    w = [TaylorSeries.zeros(problem.level, order, nvars) for _ in problem.rhs]
    indices = list(range(problem.unknowns))
    if ordering == "reverse":
        indices.reverse()
    elif ordering != "forward":
        raise ValueError(f"ordering must be 'forward' or 'reverse', got {ordering!r}")

    for k in range(order):
        unknowns = [b + wj for b, wj in zip(base, w)]
        state = _state(problem, unknowns, order)
        updates = {}
        for j in indices:
            value = _apply_rhs(problem.rhs[j], state, j, unknowns[j])
            updates[j] = value.coeffs[k] / (k + 1)
        for j in indices:
            w[j].coeffs[k + 1] = updates[j]
            if problem.n_spatial:
                w[j].coeffs[k + 1][~_spatial_mask(order, k + 1, problem.n_spatial)] = 0.0
            if not w[j].is_finite():
                raise RecursionBlowup(f"non-finite coefficient of t^{k + 1} in unknown {j}")

    series = [b + wj for b, wj in zip(base, w)]
    norms = [max(s.slice_norm(k) for s in series) for k in range(order + 1)]
    radius = estimate_radius(norms)
    if radius < MIN_RADIUS:
        raise RecursionBlowup(f"radius estimate {radius:.3e} below {MIN_RADIUS}")
    logger.debug("series radius estimate %.4g from norms %s", radius, norms)

    initial_values = [CdNum(s.coeffs[(0,) * nvars].copy()) for s in series]
    solution = CauchySolution(problem, series, radius, SeriesReport(
        order=order,
        unknowns=problem.unknowns,
        radius_estimate=radius,
        majorant_radius=majorant_radius(problem, initial_values),
        tolerance=max(ctx.tolerance, 1e-6),
        coefficient_norms=norms,
    ))
    solution.report.max_residual = series_residual(solution, ctx=ctx)
    return solution


def _spatial_mask(order: int, k: int, n_spatial: int) -> np.ndarray:
    """Spatial multi-indices allowed next to t^k (total degree <= order)."""
    return np.indices((order + 1,) * n_spatial).sum(axis=0) <= order - k


def series_residual(solution: CauchySolution, points: int = 8, ctx: Optional[Context] = None) -> float:
    """max |∂u/∂t − F(u)| at points inside half the radius estimate."""
    ctx = get_context(ctx)
    problem = solution.problem
    reach = min(0.5 * solution.radius, 0.5) if math.isfinite(solution.radius) else 0.5
    nvars = 1 + problem.n_spatial
    level = problem.level
    worst = 0.0
    for i in range(points):
        t = problem.t0 + reach * (i + 1) / points
        x = list(problem.x0)
        point = [t] + x
        center = [problem.t0] + x
        unknowns = []
        partials = []
        for s in solution.series:
            unknowns.append(TaylorSeries.constant(s.evaluate(point, center), level, 0, nvars))
            partials.append([
                TaylorSeries.constant(s.partial(v + 1).evaluate(point, center), level, 0, nvars)
                for v in range(problem.n_spatial)
            ])
        tvar = TaylorSeries.constant(t, level, 0, nvars)
        xvars = [TaylorSeries.constant(v, level, 0, nvars) for v in x]
        state = CauchyState(tvar, xvars, unknowns, partials)
        for j, (rhs, s) in enumerate(zip(problem.rhs, solution.series)):
            lhs = s.partial(0).evaluate(point, center)
            rhs_value = _apply_rhs(rhs, state, j, unknowns[j])
            gap = abs(lhs - CdNum(rhs_value.coeffs[(0,) * nvars].copy()))
            if not math.isfinite(gap):
                return math.inf
            worst = max(worst, gap)
    return worst


@dataclass
class HighOrderState:
    """``derivs[j][p]`` is ∂^p u_j/∂t^p for p < n_j."""

    t: TaylorSeries
    x: List[TaylorSeries]
    derivs: List[List[TaylorSeries]]


@dataclass
class HighOrderSystem:
    """∂^{n_j}u_j/∂t^{n_j} = F_j(t, x, derivatives of lower order)."""

    orders: Sequence[int]
    rhs: Sequence[Union[Phrase, Callable[[HighOrderState], Union[TaylorSeries, CdNum, float]]]]
    initial: Sequence[Sequence[Initial]]
    level: int
    n_spatial: int = 0
    t0: float = 0.0
    x0: Sequence[float] = ()


def reduce_to_first_order(system: HighOrderSystem) -> CauchyProblem:
    """
    Introduce v_{j,p} = ∂^p u_j/∂t^p with ∂v_{j,p}/∂t = v_{j,p+1} and
    ∂v_{j,n_j−1}/∂t = F_j; the unknowns are ordered u_0, u_0', ..., u_1, ...
    """
    if any(n < 1 for n in system.orders):
        raise ShapeMismatch(f"derivative orders must be >= 1, got {list(system.orders)}")
    if len(system.initial) != len(system.orders) or any(
        len(phis) != n for phis, n in zip(system.initial, system.orders)
    ):
        raise ShapeMismatch("each unknown needs one initial value per derivative order")
    offsets = []
    position = 0
    for n in system.orders:
        offsets.append(position)
        position += n

    def derivs_of(state: CauchyState) -> HighOrderState:
        groups = [state.u[offsets[j]: offsets[j] + n] for j, n in enumerate(system.orders)]
        return HighOrderState(state.t, state.x, groups)

    rhs: list[Rhs] = []
    initial: list[Initial] = []
    for j, n in enumerate(system.orders):
        for p in range(n - 1):
            rhs.append(lambda state, index=offsets[j] + p + 1: state.u[index])
        top = system.rhs[j]
        if isinstance(top, Phrase):
            rhs.append(lambda state, top=top, first=offsets[j]: top(state.u[first]))
        else:
            rhs.append(lambda state, top=top: top(derivs_of(state)))
        initial.extend(system.initial[j])
    return CauchyProblem(rhs, initial, system.level, system.n_spatial, system.t0, tuple(system.x0))
