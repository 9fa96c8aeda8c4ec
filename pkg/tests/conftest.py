"""Shared fixtures.

Engines are expensive to warm up (the rewrite cascade memoizes thousands of
keys), so a single session-scoped factory hands out one engine per
``(theory, n_max, d_max, broad_sign)`` tuple and every test module shares it.
"""

import pytest

from orbicorr.recon0 import build_engine
from orbicorr.statespace import build_space


@pytest.fixture(scope="session")
def engines():
    """Factory returning a cached engine for the given caps."""
    cache = {}

    def get(theory, n_max=6, d_max=6, broad_sign=1):
        key = (theory, n_max, d_max, broad_sign)
        if key not in cache:
            cache[key] = build_engine(
                theory, n_max=n_max, d_max=d_max, broad_sign=broad_sign
            )
        return cache[key]

    return get


@pytest.fixture(scope="session")
def spaces():
    """Factory returning a cached state space per theory id."""
    cache = {}

    def get(theory):
        if theory not in cache:
            cache[theory] = build_space(theory)
        return cache[theory]

    return get
