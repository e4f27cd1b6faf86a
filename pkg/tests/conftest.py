import numpy as np
import pytest

from volq import GarchModel, SimSpec, TimeSeries, simulate


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def white_noise_2000():
    return simulate(SimSpec(kind="white_noise", n=2000, seed=1)).series


@pytest.fixture
def random_walk_2000():
    return simulate(SimSpec(kind="random_walk", n=2000, seed=1)).series


@pytest.fixture
def garch11_true():
    return GarchModel(a0=1e-6, a=(0.10,), b=(0.85,))


@pytest.fixture
def garch11_sim(garch11_true):
    return simulate(SimSpec(kind="garch", n=4000, seed=11, params=garch11_true))


def series(values, **kwargs) -> TimeSeries:
    return TimeSeries(np.asarray(values, dtype=float), **kwargs)
