"""Shared fixtures. The end-to-end scenario runs are expensive (seconds
each), so they are computed once per session and shared by the unit tests
and the acceptance suite.
"""

import numpy as np
import pytest

from nswp import (Grid1D, PhysicalConstants, StaticPotential, lowest_eigenpairs)
from nswp.cases import (run_airy_forced, run_airy_free, run_gaussian_spreading,
                        run_sho_shifted, run_sho_timedep_frequency)


@pytest.fixture(scope="session")
def consts():
    return PhysicalConstants()


@pytest.fixture(scope="session")
def sho_result():
    return run_sho_shifted(n=0, amplitude=2.0, omega=1.0)


@pytest.fixture(scope="session")
def airy_free_result():
    return run_airy_free(B=1.0)


@pytest.fixture(scope="session")
def airy_forced_result():
    return run_airy_forced(lambda t: 0.3 * np.sin(2.0 * t), force_label="sin")


@pytest.fixture(scope="session")
def gaussian_result():
    return run_gaussian_spreading()


@pytest.fixture(scope="session")
def timedep_modulated():
    return run_sho_timedep_frequency(modulation=0.2)


@pytest.fixture(scope="session")
def timedep_control():
    return run_sho_timedep_frequency(modulation=0.0)


@pytest.fixture(scope="session")
def sho_ground_pair():
    grid = Grid1D(-12.0, 12.0, 2048)
    v = StaticPotential.harmonic(1.0, 1.0)
    return lowest_eigenpairs(v, grid, PhysicalConstants(), 1)[0]


def check_by_name(result, name):
    """Pull a named CheckResult out of a ScenarioResult."""
    for c in result.checks:
        if c.name == name:
            return c
    raise KeyError(name)
