import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from modlab import Grid


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def unit_square_16():
    return Grid(box_min=[0.0, 0.0], box_max=[1.0, 1.0], resolution=[16, 16])


@pytest.fixture
def interval_64():
    return Grid(box_min=[0.0], box_max=[1.0], resolution=[64])
