import math

import pytest
from hypothesis import HealthCheck, settings

# One deterministic profile for the whole suite: no deadline flakiness on
# slow CI boxes, derandomized so reruns are byte-stable.
settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    derandomize=True,
    suppress_health_check=[HealthCheck.filter_too_much],
)
settings.load_profile("suite")


@pytest.fixture
def base_cfg():
    """Two-mode bag at L = pi with the wall tuned to the (0, 1) pair resonance."""
    from fermibag.model import CavityConfig

    return CavityConfig(length=math.pi, epsilon=0.01, omega_mech=2.0, n_fermion_modes=2)
