"""Pytest configuration and fixtures."""

import os

import numpy as np
import pytest

os.environ.setdefault("ANISONORM_ENVIRONMENT", "test")

from anisonorm.config import get_settings  # noqa: E402
from anisonorm.models.grid import GridFunction, uniform_axis  # noqa: E402
from anisonorm.models.profiles import DilatedGaussian, Indicator  # noqa: E402
from anisonorm.models.test_function import TestFunction  # noqa: E402
from anisonorm.schemas.family import BlockParams, FamilyKind, OperatorFamily  # noqa: E402
from anisonorm.services.operators import clear_output_cache  # noqa: E402

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "configs")


@pytest.fixture(autouse=True)
def reset_settings_cache():
    """Ensure settings are reloaded when tests modify env vars."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(autouse=True)
def reset_output_cache():
    """Tabulated operator outputs depend on the quadrature settings."""
    clear_output_cache()
    yield
    clear_output_cache()


@pytest.fixture
def riesz_half() -> OperatorFamily:
    """Unweighted Riesz potential of order 1/2 on the line."""
    return OperatorFamily(kind=FamilyKind.RIESZ_FULL, blocks=(BlockParams(gamma=0.5),))


@pytest.fixture
def riesz_two_block() -> OperatorFamily:
    return OperatorFamily(
        kind=FamilyKind.RIESZ_FULL,
        blocks=(BlockParams(gamma=0.5), BlockParams(gamma=0.25)),
    )


@pytest.fixture
def fourier_plain() -> OperatorFamily:
    return OperatorFamily(kind=FamilyKind.FOURIER_WEIGHTED, blocks=(BlockParams(),))


@pytest.fixture
def gaussian_line() -> TestFunction:
    return TestFunction((DilatedGaussian(1.0),))


@pytest.fixture
def unit_box() -> TestFunction:
    return TestFunction((Indicator(0.0, 1.0),))


@pytest.fixture
def gaussian_grid() -> GridFunction:
    axis = uniform_axis(6.0, 601)
    return GridFunction.from_samples([axis], np.exp(-(axis**2)))


@pytest.fixture
def config_dir() -> str:
    return CONFIG_DIR
