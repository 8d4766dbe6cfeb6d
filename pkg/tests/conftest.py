"""
Pytest configuration and fixtures for the Gaussian distillation toolkit.
"""
import logging
import math

import numpy as np
import pytest

from gaussdist.core.config import Settings
from gaussdist.models.gaussian_state import SymmetricStateParams, two_mode_symmetric
from gaussdist.services.protocol_search import ProtocolInstance, random_instance


@pytest.fixture
def settings() -> Settings:
    """Fresh settings with defaults, independent of the environment."""
    return Settings(_env_file=None)


@pytest.fixture
def mixed_params() -> SymmetricStateParams:
    """Mixed symmetric state with E_N = 1."""
    return SymmetricStateParams(2.0, 1.5)


@pytest.fixture
def pure_params() -> SymmetricStateParams:
    """Two-mode squeezed vacuum with r = 0.5, so E_N = 1/ln 2."""
    return SymmetricStateParams(math.cosh(1.0), math.sinh(1.0))


@pytest.fixture
def mixed_state(mixed_params):
    return two_mode_symmetric(mixed_params)


@pytest.fixture
def identity_instance(mixed_params) -> ProtocolInstance:
    return ProtocolInstance.identity(mixed_params, seed=0)


@pytest.fixture
def random_instances() -> list[ProtocolInstance]:
    """Twenty reproducible random protocol instances."""
    return [random_instance(seed) for seed in range(20)]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def restore_root_logging():
    """Undo handlers installed by setup_logging."""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
