"""Shared fixtures: seeded generators, random numbers and sample 1-forms"""

import sys
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.algebra import CdNum, LinOpR  # noqa: E402
from src.calculus import Form1  # noqa: E402
from src.functions import COS, SIN  # noqa: E402

PROBLEMS = ROOT / "problems"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_cd(rng) -> Callable[..., CdNum]:
    """random_cd(level, scale=1.0, real=None) draws Gaussian coefficients."""

    def draw(level: int, scale: float = 1.0, real: float = None) -> CdNum:
        coeffs = rng.normal(size=1 << level) * scale
        if real is not None:
            coeffs[0] = real
        return CdNum(coeffs)

    return draw


@pytest.fixture
def problems_dir() -> Path:
    return PROBLEMS


def cubic_derivative(fn: Callable[[CdNum], CdNum], z: CdNum, h: CdNum) -> CdNum:
    """Exact [Df(z)].h for f of degree at most 3: differentiate the cubic t ↦ f(z + t h) at 0."""
    values = [fn(z + h * float(t)) for t in (-1, 0, 1, 2)]
    return (values[0] * -2.0 - values[1] * 3.0 + values[2] * 6.0 - values[3]) * (1.0 / 6.0)


def polynomial_potential(x: CdNum, y: CdNum) -> CdNum:
    """x³ + x²y + yx² + xyx − y³ with left bracketing."""
    return x * x * x + x * x * y + y * (x * x) + x * y * x - y * y * y


def trig_potential(x: CdNum, y: CdNum) -> CdNum:
    return SIN(x) * COS(y)


@pytest.fixture
def polynomial_form() -> Form1:
    """d(x³ + x²y + yx² + xyx − y³) over octonions."""
    level = 3

    def A(x, y):
        return LinOpR.from_function(level, lambda h: cubic_derivative(lambda t: polynomial_potential(t, y), x, h))

    def B(x, y):
        return LinOpR.from_function(level, lambda k: cubic_derivative(lambda t: polynomial_potential(x, t), y, k))

    return Form1(A, B, level, radius=0.5)


@pytest.fixture
def trig_form() -> Form1:
    """d(sin x · cos y) over octonions."""
    level = 3

    def A(x, y):
        c = COS(y)
        return LinOpR.from_function(level, lambda h: SIN.apply_derivative(x, h) * c)

    def B(x, y):
        s = SIN(x)
        return LinOpR.from_function(level, lambda k: s * COS.apply_derivative(y, k))

    return Form1(A, B, level, radius=0.5)
