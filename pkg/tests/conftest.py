"""
Shared fixtures for the pulsetomo test suite.
"""
from typing import Callable

import numpy as np
import pytest

from pulsetomo.helpers.pulse_model import PARAMETER_NAMES, PulseErrorParams


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def make_params(rng) -> Callable[[float], PulseErrorParams]:
    """
    Factory of random parameter sets with every entry uniform in [-scale, scale].
    """
    def factory(scale: float) -> PulseErrorParams:
        return PulseErrorParams.from_vector(rng.uniform(-scale, scale, size=len(PARAMETER_NAMES)))

    return factory
