"""
Filename: conftest.py
Project: TD Clock Stability (TDCS)
Description: Maintain Common Test Configs
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import logging
import sys
from typing import Callable

import numpy as np
import pytest

from td_clock_stability.models.counterexample_models import CounterexampleFamily
from td_clock_stability.models.instance_models import StabilityInstance
from td_clock_stability.schemas.stability_schemas import StabilityRegion
from td_clock_stability.services.counterexample import build_family
from td_clock_stability.services.counterexample import family_instance
from td_clock_stability.services.stability import stability_region

RANDOM_SEED = 20240611


@pytest.fixture(scope="session")
def family23() -> CounterexampleFamily:
    return build_family(23)


@pytest.fixture(scope="session")
def instance23(family23) -> StabilityInstance:
    return family_instance(family23)


@pytest.fixture(scope="session")
def region23(instance23) -> StabilityRegion:
    return stability_region(instance23)


@pytest.fixture
def single_state() -> StabilityInstance:
    return StabilityInstance.single_state()


@pytest.fixture
def three_state() -> StabilityInstance:
    """small aperiodic chain with unequal weights, used where a hand-checkable instance helps"""
    return StabilityInstance(
        d_mu=[0.2, 0.3, 0.5],
        P_pi=[[0.4, 0.1, 0.5], [0.1, 0.4, 0.5], [0.3, 0.6, 0.1]],
        normalized=True,
        name="three-state",
    )


def make_random_instance(rng: np.random.Generator, n: int, normalized: bool = False) -> StabilityInstance:
    """dense positive P_pi (hence irreducible) and weights bounded away from zero"""
    P = rng.uniform(0.05, 1.0, size=(n, n))
    P /= P.sum(axis=1, keepdims=True)
    d = rng.uniform(0.1, 1.0, size=n)
    if normalized:
        d /= d.sum()
    return StabilityInstance(d_mu=d, P_pi=P, normalized=normalized, name=f"random-{n}")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(RANDOM_SEED)


@pytest.fixture
def random_instance(rng) -> Callable[..., StabilityInstance]:
    def factory(n: int, normalized: bool = False) -> StabilityInstance:
        return make_random_instance(rng, n, normalized)

    return factory


@pytest.fixture
def restore_root_logging():
    """removes handlers that configure_logging attached during the test"""
    root = logging.getLogger()
    handlers, level, hook = list(root.handlers), root.level, sys.excepthook
    yield root
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    root.setLevel(level)
    sys.excepthook = hook
