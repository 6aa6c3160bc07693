"""Pydantic models for verification reports"""

import math
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator


class ResidualReport(BaseModel):
    """Residual of an equation sampled on a grid"""
    points: List[List[float]] = Field(default_factory=list, description="Sample points as coefficient lists")
    residuals: List[float] = Field(default_factory=list, description="|LHS - RHS| per point")
    max_residual: float = Field(0.0, ge=0.0)
    mean_residual: float = Field(0.0, ge=0.0)
    tolerance: float = Field(..., gt=0.0)
    failures: List[str] = Field(default_factory=list, description="Points where evaluation failed")

    @model_validator(mode="after")
    def _ordered(self):
        if self.mean_residual > self.max_residual * (1.0 + 1e-12) + 1e-300:
            raise ValueError("mean residual cannot exceed max residual")
        return self

    @property
    def passed(self) -> bool:
        """At least one point evaluated, none failed, all within tolerance."""
        return bool(self.residuals) and not self.failures and self.max_residual <= self.tolerance

    @classmethod
    def from_values(
        cls,
        points: List[List[float]],
        residuals: List[float],
        tolerance: float,
        failures: Optional[List[str]] = None,
    ) -> "ResidualReport":
        values = list(residuals)
        max_r = max(values) if values else 0.0
        mean_r = sum(values) / len(values) if values else 0.0
        return cls(
            points=points,
            residuals=residuals,
            max_residual=max_r,
            mean_residual=min(mean_r, max_r),
            tolerance=tolerance,
            failures=failures or [],
        )


class ExactnessReport(BaseModel):
    """Closedness test of a 1-form A.dx + B.dy"""
    exact: bool
    max_defect: float = Field(..., ge=0.0)
    scale: float = Field(..., gt=0.0)
    samples: int
    component_defect: Optional[float] = Field(None, description="Same test on real coefficient functions")
    failures: List[str] = Field(default_factory=list)


class SeriesReport(BaseModel):
    """Diagnostics of a power-series Cauchy solve"""
    order: int
    unknowns: int
    radius_estimate: float
    majorant_radius: Optional[float] = None
    max_residual: float = Field(0.0, ge=0.0)
    tolerance: float = Field(..., gt=0.0)
    coefficient_norms: List[float] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return math.isfinite(self.max_residual) and self.max_residual <= self.tolerance


class SolveReport(BaseModel):
    """Report written by the CLI for solve/check/series"""
    kind: str
    max_residual: float = Field(..., ge=0.0)
    mean_residual: float = Field(..., ge=0.0)
    tolerance: float = Field(..., gt=0.0)
    grid_points: int
    solution: str = Field(..., description="Printable form or 'grid-backed'")
    branch_notes: List[str] = Field(default_factory=list)
    failures: List[str] = Field(default_factory=list, description="Grid points where evaluation failed")
    verified: bool
    singular_solution: Optional[str] = None
    singular_max_residual: Optional[float] = None
