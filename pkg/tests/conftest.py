import random

import pytest
from hypothesis import HealthCheck, settings

from taildep.instances import line_fixture_metric, line_fixture_model

settings.register_profile(
    "taildep",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=60,
)
settings.load_profile("taildep")


@pytest.fixture
def line_model():
    return line_fixture_model()


@pytest.fixture
def line_metric():
    return line_fixture_metric()


@pytest.fixture
def rng():
    return random.Random(20240811)
