import numpy as np
import pytest

from qdyn import Rates


@pytest.fixture
def rates_04_06() -> Rates:
    return Rates(np.array([0.4, 0.6]))


@pytest.fixture
def rates_ones3() -> Rates:
    return Rates(np.array([1.0, 1.0, 1.0]))
