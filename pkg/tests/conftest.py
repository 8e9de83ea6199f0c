import numpy as np
import pytest

from raylift import Field


@pytest.fixture(params=[Field.REAL, Field.COMPLEX], ids=["real", "complex"])
def field(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
