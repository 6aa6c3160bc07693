"""Basis multiplication table for the Cayley-Dickson doubling"""

from __future__ import annotations

import threading
from functools import lru_cache
from typing import NamedTuple

import numpy as np

MAX_LEVEL = 4


class SignedBasis(NamedTuple):
    """i_j · i_k = sign · i_index"""
    sign: int
    index: int


def _check_level(r: int) -> None:
    if not 0 <= r <= MAX_LEVEL:
        raise ValueError(f"Cayley-Dickson level must be in [0, {MAX_LEVEL}], got {r}")


@lru_cache(maxsize=None)
def _product(r: int, j: int, k: int) -> SignedBasis:
    # Level r is pairs (xi, eta) over level r-1 with i_{N+m} = (0, i_m):
    # (xi + eta l)(gamma + delta l) = (xi gamma - conj(delta) eta) + (delta xi + eta conj(gamma)) l
    if r == 0:
        return SignedBasis(1, 0)
    half = 1 << (r - 1)
    if j < half and k < half:
        return _product(r - 1, j, k)
    if j < half:
        # xi = i_j, delta = i_k'
        s, m = _product(r - 1, k - half, j)
        return SignedBasis(s, half + m)
    if k < half:
        # eta = i_j', gamma = i_k
        s, m = _product(r - 1, j - half, k)
        if k != 0:
            s = -s
        return SignedBasis(s, half + m)
    # eta = i_j', delta = i_k': -conj(delta) eta
    s, m = _product(r - 1, k - half, j - half)
    if k - half == 0:
        s = -s
    return SignedBasis(s, m)


def basis_product(r: int, j: int, k: int) -> SignedBasis:
    """
    Product of two basis units at level r.

    Args:
        r: Cayley-Dickson level (0 reals, 1 complex, 2 quaternions, 3 octonions, 4 sedenions)
        j: Index of the left factor
        k: Index of the right factor

    Returns:
        SignedBasis with i_j · i_k = sign · i_index
    """
    _check_level(r)
    dim = 1 << r
    if not (0 <= j < dim and 0 <= k < dim):
        raise ValueError(f"basis indices must lie in [0, {dim - 1}], got ({j}, {k})")
    return _product(r, j, k)


_table_lock = threading.Lock()
_tables: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _build(r: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    dim = 1 << r
    signs = np.zeros((dim, dim), dtype=np.int8)
    indices = np.zeros((dim, dim), dtype=np.int16)
    structure = np.zeros((dim, dim, dim), dtype=float)
    for j in range(dim):
        for k in range(dim):
            s, m = _product(r, j, k)
            signs[j, k] = s
            indices[j, k] = m
            structure[j, k, m] = s
    for arr in (signs, indices, structure):
        arr.setflags(write=False)
    return signs, indices, structure


def _tables_for(r: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    _check_level(r)
    tables = _tables.get(r)
    if tables is None:
        with _table_lock:
            tables = _tables.get(r)
            if tables is None:
                tables = _build(r)
                _tables[r] = tables
    return tables


def multiplication_table(r: int) -> tuple[np.ndarray, np.ndarray]:
    """Signs and indices of all basis products at level r, as read-only arrays."""
    signs, indices, _ = _tables_for(r)
    return signs, indices


def structure_tensor(r: int) -> np.ndarray:
    """Read-only tensor T with (a·b)_m = Σ_jk a_j b_k T[j, k, m]."""
    return _tables_for(r)[2]


def format_basis(sign: int, index: int) -> str:
    return f"{'+' if sign > 0 else '-'}e{index}"
