"""Shared helpers for the test suite."""
import numpy as np
import pytest

from cellnav import Scenario


def make_scenario(rng, m=6, region=10_000.0, u0=(2000.0, 2000.0), uf=(8000.0, 8000.0)):
    """Random instance in the reference experiment's style."""
    return Scenario(
        gbs=rng.uniform(0.0, region, size=(m, 2)),
        u0=np.array(u0),
        uf=np.array(uf),
        uav_altitude=90.0,
        gbs_altitude=12.5,
        vmax=50.0,
        gamma0_db=80.0,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_scenario():
    """Deterministic 3-GBS instance bridging u0 to uF."""
    return Scenario(
        gbs=np.array([[1000.0, 0.0], [3000.0, 0.0], [5000.0, 0.0]]),
        u0=np.array([0.0, 0.0]),
        uf=np.array([6000.0, 0.0]),
        uav_altitude=100.0,
        gbs_altitude=10.0,
        vmax=20.0,
        gamma0_db=80.0,
    )
