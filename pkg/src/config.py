"""Numerical context and environment configuration"""

import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

load_dotenv()

DEFAULT_TOLERANCE = 1e-9


class Context(BaseModel):
    """
    Tolerances and iteration limits shared by all operations.

    Every public operation takes ``ctx=None`` and falls back to
    :func:`get_context`. Use ``ctx.model_copy(update={...})`` for a
    per-call override.
    """

    model_config = ConfigDict(frozen=True)

    tolerance: float = Field(default=DEFAULT_TOLERANCE, gt=0)
    fd_step: float = Field(default=1e-5, gt=0)
    newton_max_iter: int = 50
    newton_step_tol: float = 1e-10
    damping_halvings: int = 30
    quad_rtol: float = 1e-10
    quad_max_subdivisions: int = 4096
    branch_max_depth: int = 20
    branch_jump: float = 1.5707963267948966
    residual_step: float = Field(default=1e-3, gt=0)
    ivp_rtol: float = 1e-12
    ivp_atol: float = 1e-13


def _parse_float(name: str, raw: Optional[str], default: float) -> float:
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")


@lru_cache(maxsize=8)
def _context_from_env(tolerance_raw: Optional[str], fd_step_raw: Optional[str]) -> Context:
    return Context(
        tolerance=_parse_float("OCTODE_TOLERANCE", tolerance_raw, DEFAULT_TOLERANCE),
        fd_step=_parse_float("OCTODE_FD_STEP", fd_step_raw, 1e-5),
    )


def get_context(ctx: Optional[Context] = None) -> Context:
    """
    Resolve the context for a call.

    Args:
        ctx: Explicit context; returned unchanged when given

    Returns:
        ``ctx`` or a context built from OCTODE_TOLERANCE / OCTODE_FD_STEP
    """
    if ctx is not None:
        return ctx
    return _context_from_env(os.getenv("OCTODE_TOLERANCE"), os.getenv("OCTODE_FD_STEP"))
