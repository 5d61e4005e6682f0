import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from jacobiharm.specfun import JacobiParams  # noqa: E402
from jacobiharm.transforms import QuadratureSpec  # noqa: E402

ACCEPTANCE_PARAMS = [(-0.5, -0.5), (0.5, -0.5), (1.5, -0.5), (3.0, -0.5)]


@pytest.fixture
def h3():
    return JacobiParams(0.5, -0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
