"""Shared fixtures: seeded RNGs and small random problem instances."""

import numpy as np
import pytest

from wtv.grid import WeightField


@pytest.fixture
def rng():
    return np.random.default_rng(20260818)


@pytest.fixture
def random_weights(rng):
    def make(n, lo=0.2, hi=2.0):
        wx = rng.uniform(lo, hi, size=(n, n))
        wy = rng.uniform(lo, hi, size=(n, n))
        return WeightField(wx=wx, wy=wy)

    return make


@pytest.fixture
def random_image(rng):
    def make(n, scale=1.0):
        return scale * rng.normal(size=(n, n))

    return make
