import pytest

from ddestab.params import NormParams


@pytest.fixture
def np_core() -> NormParams:
    # inside the band, below the linear threshold, composite coefficient defined
    return NormParams(a=-2.0, theta=0.39)


@pytest.fixture
def np_linear() -> NormParams:
    return NormParams(a=-2.0, theta=0.5)


@pytest.fixture
def np_sector() -> NormParams:
    return NormParams(a=-10.0, theta=0.88)
