"""Elementary functions of a Cayley-Dickson variable"""

from .polar import PolarForm, polar_decompose, canonical_axis, from_plane, to_plane
from .elementary import (
    cd_exp,
    cd_ln,
    cd_ln_principal,
    LnResult,
    cd_pow_real,
    RootKind,
    RootSet,
    sqrt_set,
    RealAnalytic,
    REAL_ANALYTIC,
    EXP,
    SIN,
    COS,
    SINH,
    COSH,
    LOG,
)
from .branch import continue_ln_along_path, nearest_log, ln_branch_derivative

__all__ = [
    "PolarForm",
    "polar_decompose",
    "canonical_axis",
    "from_plane",
    "to_plane",
    "cd_exp",
    "cd_ln",
    "cd_ln_principal",
    "LnResult",
    "cd_pow_real",
    "RootKind",
    "RootSet",
    "sqrt_set",
    "RealAnalytic",
    "REAL_ANALYTIC",
    "EXP",
    "SIN",
    "COS",
    "SINH",
    "COSH",
    "LOG",
    "continue_ln_along_path",
    "nearest_log",
    "ln_branch_derivative",
]
