import numpy as np
import pytest

from modrec.waveform import RrcPulse, SymbolTiming


@pytest.fixture(scope="session", autouse=True)
def _warm_pulse_cache():
    # The per-rolloff power normalization is lru-cached; warming it keeps
    # individual test timings honest.
    for k in range(1, 11):
        RrcPulse.normalized(k / 10)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def timing():
    # Asynchronous sampling: fractional symbol period and fractional delay.
    return SymbolTiming(ns=6, eps=0.37, eps0=0.53, k0=0)


@pytest.fixture
def pulse():
    return RrcPulse.normalized(0.3)
