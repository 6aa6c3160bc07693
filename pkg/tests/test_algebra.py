"""Tests for Cayley-Dickson arithmetic"""

import itertools

import numpy as np
import pytest

from src.algebra import (
    CdNum,
    LinOpR,
    Path,
    basis_product,
    cd_conj,
    cd_inv,
    cd_inv_verified,
    cd_mul,
    coord_extract,
    format_cdnum,
    format_tuple,
    multiplication_table,
    structure_tensor,
)
from src.config import Context
from src.errors import LevelMismatch, NonFiniteValue, NonInvertibleOperator, ZeroOrNearZero


def test_quaternion_table_convention():
    assert basis_product(2, 1, 2) == (1, 3)
    assert basis_product(2, 2, 1) == (-1, 3)
    for k in range(1, 4):
        assert basis_product(2, k, k) == (-1, 0)


@pytest.mark.parametrize("r", [0, 1, 2, 3, 4])
def test_table_rows_are_permutations(r):
    signs, indices = multiplication_table(r)
    dim = 1 << r
    for row in indices:
        assert sorted(row.tolist()) == list(range(dim))
    assert set(np.unique(signs).tolist()) <= {-1, 1}


def test_level_out_of_range():
    with pytest.raises(ValueError):
        basis_product(5, 0, 0)


def _batch_product(r):
    tensor = structure_tensor(r)
    return lambda a, b: np.einsum("nj,nk,jkm->nm", a, b, tensor)


def test_quaternions_associative(rng):
    a, b, c = rng.normal(size=(3, 10_000, 4))
    mul = _batch_product(2)
    norms = [np.linalg.norm(v, axis=1) for v in (a, b, c)]
    gap = np.linalg.norm(mul(mul(a, b), c) - mul(a, mul(b, c)), axis=1)
    assert np.all(gap < 1e-10 * np.maximum(1.0, norms[0] * norms[1] * norms[2]))


def test_octonions_not_associative_but_alternative(rng):
    witness = None
    for j, k, l in itertools.product(range(1, 8), repeat=3):
        e = [CdNum.basis(i, 3) for i in (j, k, l)]
        left, right = (e[0] * e[1]) * e[2], e[0] * (e[1] * e[2])
        if left == -right and left != right:
            witness = (j, k, l)
            break
    assert witness is not None

    x, y = rng.normal(size=(2, 10_000, 8))
    mul = _batch_product(3)
    scale = np.maximum(1.0, np.linalg.norm(x, axis=1) ** 2 * np.linalg.norm(y, axis=1))
    left = np.linalg.norm(mul(mul(x, x), y) - mul(x, mul(x, y)), axis=1)
    right = np.linalg.norm(mul(mul(y, x), x) - mul(y, mul(x, x)), axis=1)
    assert np.all(left < 1e-10 * scale)
    assert np.all(right < 1e-10 * scale)


def test_octonion_norm_multiplicative(rng):
    a, b = rng.normal(size=(2, 10_000, 8))
    product = _batch_product(3)(a, b)
    np.testing.assert_allclose(
        np.linalg.norm(product, axis=1),
        np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1),
        rtol=1e-12,
    )


def test_sedenion_zero_divisor():
    found = None
    units = range(1, 16)
    for j, k, l, m in itertools.product(units, repeat=4):
        if j >= k or l >= m:
            continue
        for s1, s2 in itertools.product((1.0, -1.0), repeat=2):
            a = CdNum.basis(j, 4) + CdNum.basis(k, 4) * s1
            b = CdNum.basis(l, 4) + CdNum.basis(m, 4) * s2
            if abs(a * b) < 1e-12:
                found = (a, b)
                break
        if found:
            break
    assert found is not None
    a, b = found
    assert abs(abs(a) * abs(b) - abs(a * b)) >= 0.5


@pytest.mark.parametrize("r", [2, 3, 4])
def test_coordinates_from_products(r, random_cd):
    for _ in range(50):
        z = random_cd(r)
        extracted = [coord_extract(z, j) for j in range(1 << r)]
        np.testing.assert_allclose(extracted, z.coeffs, atol=1e-12)


def test_coordinate_extraction_needs_quaternions():
    with pytest.raises(ValueError):
        coord_extract(CdNum([1.0, 2.0]), 0)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_inverse_and_conjugate(r, random_cd):
    z = random_cd(r)
    assert (z * cd_inv(z)).isclose(1.0, 1e-12)
    assert (cd_inv(z) * z).isclose(1.0, 1e-12)
    assert (z * cd_conj(z)).isclose(abs(z) ** 2, 1e-12)
    assert cd_mul(z, z).isclose(z * z, 0.0)


def test_inverse_of_zero():
    with pytest.raises(ZeroOrNearZero):
        cd_inv(CdNum.zero(2))


def test_levels_promote_on_mixed_arithmetic():
    q = CdNum([1.0, 2.0, 3.0, 4.0])
    o = CdNum.basis(5, 3)
    assert (q + o).level == 3
    with pytest.raises(LevelMismatch):
        o.promote(2)
    with pytest.raises(LevelMismatch):
        CdNum([1.0] * 5, level=2)


def test_non_finite_rejected():
    with pytest.raises(NonFiniteValue):
        CdNum([1.0, float("nan")])


def test_text_forms():
    z = CdNum([1.0, 0.0, -2.0, 0.5])
    assert format_cdnum(z) == "1.0 - 2.0*e2 + 0.5*e3"
    assert format_tuple(z) == "(1.0,0.0,-2.0,0.5)"
    assert format_cdnum(CdNum.zero(2)) == "0.0"


def test_linop_inverse_and_singularity(random_cd):
    a = random_cd(3)
    op = LinOpR.left_mul(a)
    h = random_cd(3)
    assert op.inverse().apply(op.apply(h)).isclose(h, 1e-10)
    with pytest.raises(NonInvertibleOperator):
        LinOpR.zero(2).inverse()


def test_path_geometry():
    path = Path.polyline([CdNum.zero(2), CdNum.one(2), CdNum([1.0, 1.0, 0.0, 0.0])])
    assert path.segment_count == 2
    assert path.length() == pytest.approx(2.0)
    assert path.point(0.5).isclose(1.0, 1e-15)
    assert path.derivative(0.75).isclose(CdNum([0.0, 2.0, 0.0, 0.0]), 1e-15)
    with pytest.raises(ValueError):
        Path.straight(CdNum.one(2), CdNum.one(2))


def test_inverse_check_uses_context_tolerance(random_cd):
    loose = Context(tolerance=1e-4)
    small = CdNum.real_number(1e-5, 4)
    inverse, ok = cd_inv_verified(small)
    assert ok
    assert (small * inverse).isclose(1.0, 1e-9)
    with pytest.raises(ZeroOrNearZero):
        cd_inv_verified(small, loose)

    for _ in range(20):
        a = random_cd(4)
        _, ok = cd_inv_verified(a, Context(tolerance=1e-12))
        assert ok
