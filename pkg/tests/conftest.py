import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from spinphase import ChainConfig, ProductStateSpec, spectral_decompose

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


thetas = st.floats(0.0, math.pi, allow_nan=False)
phis = st.floats(0.0, 2 * math.pi, allow_nan=False, exclude_max=True)
interior_thetas = st.floats(0.05, math.pi - 0.05)


def product_specs(n_min=1, n_max=5):
    return st.lists(st.tuples(thetas, phis), min_size=n_min, max_size=n_max).map(ProductStateSpec)


def random_state(rng, n):
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return v / np.linalg.norm(v)


@pytest.fixture(scope="session")
def eig_cache():
    cache = {}

    def get(n, j=1.0, b=3.0, periodic=True):
        key = (n, j, b, periodic)
        if key not in cache:
            cfg = ChainConfig(n, j, b, periodic=periodic)
            cache[key] = (cfg, spectral_decompose(cfg))
        return cache[key]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
