"""Pydantic models for JSON problem files"""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator


class GridSpec(BaseModel):
    """Seeded residual grid"""
    points: int = Field(50, gt=0, description="Number of sample points")
    seed: int = Field(0, description="Seed of the scrambled Halton sequence")
    radius: float = Field(1.0, gt=0.0, description="Extent of the sampled region")
    plane: Optional[int] = Field(None, ge=1, description="Restrict samples to the plane R + R·e<plane>")


class BoundarySpec(BaseModel):
    """Boundary data on the hyperplane Re x = alpha0"""
    alpha0: float = 0.0
    eta: str = Field("0", description="Expression in z giving eta(Im x)")
    etas: List[str] = Field(default_factory=list, description="eta_0..eta_{n-1} for n-th order problems")


class ProblemFile(BaseModel):
    """Problem description accepted by the CLI"""
    algebra_level: Literal[2, 3, 4]
    kind: str
    ingredients: Dict[str, str] = Field(default_factory=dict)
    scalars: Dict[str, float] = Field(default_factory=dict)
    boundary: BoundarySpec = Field(default_factory=BoundarySpec)
    grid: GridSpec = Field(default_factory=GridSpec)
    initial: List[str] = Field(default_factory=list, description="Initial values for series problems")
    orders: List[int] = Field(default_factory=list, description="Derivative orders for series problems")
    options: Dict[str, str] = Field(default_factory=dict, description="String switches such as the homogeneous side")

    @field_validator("kind")
    @classmethod
    def _normalize_kind(cls, value: str) -> str:
        return value.strip()
