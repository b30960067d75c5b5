import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from finsler_polydisc.core import MetricParams

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

T_GRID = (0.0, 0.5, 1.0, 3.0)
K_GRID = (2, 3, 5)
PARAM_GRID = [MetricParams(t, k) for t in T_GRID for k in K_GRID]


@pytest.fixture
def gen():
    return np.random.default_rng(12345)
