import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("lct", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "lct"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
