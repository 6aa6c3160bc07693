"""Pydantic models for problem files and reports"""

from .problem import GridSpec, BoundarySpec, ProblemFile
from .reports import ResidualReport, ExactnessReport, SeriesReport, SolveReport

__all__ = [
    "GridSpec",
    "BoundarySpec",
    "ProblemFile",
    "ResidualReport",
    "ExactnessReport",
    "SeriesReport",
    "SolveReport",
]
