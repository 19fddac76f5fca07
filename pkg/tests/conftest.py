import numpy as np
import pytest

import settings
from hamiltonians import SystemParams


@pytest.fixture(autouse=True)
def _no_default_config(tmp_path, monkeypatch):
    # a reciprocation.config in the checkout must not leak into tests
    monkeypatch.setattr(settings, "CONFIG_PATH", str(tmp_path / "absent.config"))


@pytest.fixture
def paper():
    """Δ/g1 = 100, δ/λ0 = 0.1, g2 = g1/√(1+ε), ω = 0."""
    return SystemParams.from_ratios(100.0, 0.1)


@pytest.fixture
def raman():
    return SystemParams.from_ratios(100.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
