"""Cayley-Dickson arithmetic"""

from .table import SignedBasis, basis_product, multiplication_table, structure_tensor, format_basis, MAX_LEVEL
from .cdnum import (
    CdNum,
    cd_mul,
    cd_conj,
    cd_inv,
    cd_inv_verified,
    coord_extract,
    mul_batch,
    format_cdnum,
    format_tuple,
    unit_imaginary,
)
from .linop import LinOpR
from .path import Path

__all__ = [
    "SignedBasis",
    "basis_product",
    "multiplication_table",
    "structure_tensor",
    "format_basis",
    "MAX_LEVEL",
    "CdNum",
    "cd_mul",
    "cd_conj",
    "cd_inv",
    "cd_inv_verified",
    "coord_extract",
    "mul_batch",
    "format_cdnum",
    "format_tuple",
    "unit_imaginary",
    "LinOpR",
    "Path",
]
