import pytest
from hypothesis import HealthCheck, settings

import hedgeplay as hp

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

EX1_MATRIX = [["1", "0"], ["-1", "3"]]
EX3_MATRIX = [["1", "0"], ["-2", "7"]]


@pytest.fixture(scope="session")
def ex1_spec():
    # the running 2x2 example: value 3/5, T* = 5
    return hp.validate(EX1_MATRIX, "auto", 700)


@pytest.fixture(scope="session")
def ex3_spec():
    return hp.validate(EX3_MATRIX, "auto", 1000)


@pytest.fixture(scope="session")
def ex1_small():
    return hp.validate(EX1_MATRIX, "auto", 60)
