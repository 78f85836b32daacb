import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240831)


def random_gray(rng, h=32, w=32):
    return rng.random((h, w))


def random_rgb(rng, h=32, w=32):
    return rng.random((h, w, 3))
