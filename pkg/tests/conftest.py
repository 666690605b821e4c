import random

import pytest

from molzk import circuit as circuit_mod
from molzk import groth16
from molzk.records import TaskType, ThresholdSet


@pytest.fixture(scope="session")
def theta_binary():
    return ThresholdSet.defaults(TaskType.BINARY)


@pytest.fixture(scope="session")
def theta_regression():
    return ThresholdSet.defaults(TaskType.REGRESSION)


@pytest.fixture(scope="session")
def cs(theta_binary):
    return circuit_mod.synthesize(theta_binary, TaskType.BINARY)


@pytest.fixture(scope="session")
def keys(cs):
    # One trusted setup shared by the whole session; the circuit is
    # universal so the same keys serve binary and regression statements.
    return groth16.setup(cs, random.Random(0xC0FFEE))


@pytest.fixture(scope="session")
def pk(keys):
    return keys[0]


@pytest.fixture(scope="session")
def vk(keys):
    return keys[1]
