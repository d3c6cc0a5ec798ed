import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pertsemi import Algebra

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SINGLE = ["M1(C)", "M2(C)", "M3(C)", "M2(R)", "M3(R)", "H", "M2(H)"]
SUMS = ["C^2", "C^3", "M2(C)+M1(C)", "M2(R)+H", "C+M2(R)"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def algebra(text):
    return Algebra.parse(text)


def random_hermitian(rng, n, scale=1.0):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (x + x.conj().T) / 2
