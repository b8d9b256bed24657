import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make reference_filters importable

from evdenoise import Events, SensorGeometry


@pytest.fixture
def geom32():
    return SensorGeometry(32, 32)


def random_events(rng, n, width, height, max_gap_us=2000):
    """Sorted random stream with occasional timestamp ties."""
    gaps = rng.integers(0, max_gap_us, size=n)
    gaps[rng.random(n) < 0.05] = 0
    t = np.cumsum(gaps)
    return Events(
        t,
        rng.integers(0, width, size=n),
        rng.integers(0, height, size=n),
        rng.integers(0, 2, size=n),
    )
