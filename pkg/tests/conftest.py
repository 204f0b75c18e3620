import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from fourwave.classical import ReducedCoords  # noqa: E402
from fourwave.sector import FourWaveParams  # noqa: E402

WORKED_B = (2.0, 2.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def unit_params():
    return FourWaveParams(1.0, 1.0, 1.0, 1.0, g=1.0, hbar=1.0)


@pytest.fixture
def resonant_params():
    return FourWaveParams(1.3, 0.7, 0.9, 1.5, g=0.8, hbar=0.6)


@pytest.fixture
def worked_start():
    return ReducedCoords(1.0, math.pi / 2, WORKED_B)
