"""Tests for exp, Ln, powers, square roots and branch tracking"""

import math

import numpy as np
import pytest

from src.algebra import CdNum, Path
from src.calculus import directional_fd
from src.errors import PathThroughZero, ZeroInput
from src.functions import (
    COS,
    EXP,
    SIN,
    RootKind,
    canonical_axis,
    cd_exp,
    cd_ln,
    cd_pow_real,
    continue_ln_along_path,
    polar_decompose,
    sqrt_set,
    from_plane,
)


@pytest.mark.parametrize("r", [2, 3])
def test_exp_of_ln_is_identity(r, random_cd):
    for _ in range(10_000):
        z = random_cd(r)
        if abs(z.imag) <= 1e-6:
            continue
        assert cd_exp(cd_ln(z)).isclose(z, 1e-9 * max(1.0, abs(z)))


def test_exp_periodic_in_each_plane(rng):
    for _ in range(100):
        direction = rng.normal(size=7)
        axis = CdNum(np.concatenate([[0.0], direction / np.linalg.norm(direction)]))
        phi = rng.uniform(-3.0, 3.0)
        k = int(rng.integers(-2, 3))
        assert cd_exp(axis * (phi + 2.0 * math.pi * k)).isclose(cd_exp(axis * phi), 1e-12)


def test_exp_on_real_axis_matches_math():
    assert cd_exp(CdNum.real_number(1.5, 2)).isclose(math.exp(1.5), 1e-15)


def test_ln_of_zero():
    with pytest.raises(ZeroInput):
        cd_ln(CdNum.zero(3))


def test_polar_axis_is_canonical(random_cd):
    z = random_cd(3)
    polar = polar_decompose(z)
    first = next(c for c in polar.axis.coeffs[1:] if abs(c) > 1e-14)
    assert first > 0
    rebuilt = from_plane(polar.plane_coordinates(), polar.axis)
    assert rebuilt.isclose(z, 1e-12)
    axis, sign = canonical_axis(-polar.axis)
    assert axis.isclose(polar.axis, 1e-15) and sign == -1


@pytest.mark.parametrize("r", [2, 3])
def test_square_roots(r, random_cd):
    for _ in range(50):
        z = random_cd(r)
        roots = sqrt_set(z)
        assert roots.kind is RootKind.POINT_PAIR
        for w in roots.points:
            assert (w * w).isclose(z, 1e-10 * max(1.0, abs(z)))


def test_square_root_of_negative_real_is_a_sphere(rng):
    roots = sqrt_set(CdNum.real_number(-4.0, 2))
    assert roots.kind is RootKind.SPHERE
    assert roots.radius == pytest.approx(2.0)
    for w in roots.sample(rng, count=20):
        assert (w * w).isclose(-4.0, 1e-10)
        assert roots.contains(w)


def test_real_powers(random_cd):
    z = random_cd(3, real=2.0)
    root = cd_pow_real(z, 0.5)
    assert (root * root).isclose(z, 1e-10)
    assert cd_pow_real(z, 3.0).isclose(z * z * z, 1e-10)


def test_real_analytic_lift(random_cd):
    z = random_cd(3, scale=0.5)
    s, c = SIN(z), COS(z)
    assert (s * s + c * c).isclose(1.0, 1e-10)
    assert SIN(CdNum.real_number(0.3, 3)).isclose(math.sin(0.3), 1e-15)
    assert EXP(z).isclose(cd_exp(z), 1e-12)


def test_real_analytic_derivative_matches_differences(random_cd):
    z, h = random_cd(3, scale=0.5), random_cd(3)
    exact = SIN.apply_derivative(z, h)
    numeric = directional_fd(SIN, z, h, stencil=5)
    assert exact.isclose(numeric, 1e-7)


def test_monodromy_around_origin():
    one, e1 = CdNum.one(3), CdNum.basis(1, 3)
    loop = Path.polyline([one, e1, -one, -e1, one])
    end = continue_ln_along_path(loop, cd_ln(one))
    assert (end - cd_ln(one)).isclose(e1 * (2.0 * math.pi), 1e-8)


def test_loop_in_purely_imaginary_plane_keeps_branch():
    e1, e2 = CdNum.basis(1, 3), CdNum.basis(2, 3)
    loop = Path.polyline([e1, e2, -e1, -e2, e1])
    start = cd_ln(e1)
    end = continue_ln_along_path(loop, start)
    assert end.isclose(start, 1e-8)


def test_path_through_origin():
    with pytest.raises(PathThroughZero):
        continue_ln_along_path(Path.straight(CdNum.one(2), -CdNum.one(2)), cd_ln(CdNum.one(2)))
