import numpy as np
import pytest

from qd3.params import default_params


@pytest.fixture(scope="session")
def p1():
    return default_params(1)


@pytest.fixture(scope="session")
def p2():
    return default_params(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-300))
