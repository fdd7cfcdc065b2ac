import numpy as np
import pytest

from crosskerr import CouplingSet, DetectionChain
from crosskerr.constants import TWO_PI


@pytest.fixture(scope="session")
def design_couplings():
    """The design operating point: g_zz/2pi = 250, g_a/2pi = 150,
    kappa/2pi = 40 MHz, resonator at 7 GHz."""
    return CouplingSet.from_mhz(g_zz=250.0, g_a=150.0, kappa=40.0)


@pytest.fixture(scope="session")
def quantum_limited_chain(design_couplings):
    """T_N = 140 mK, B = 50 MHz, tau = 10 ns, carrier at the resonator."""
    return DetectionChain(
        noise_temperature=0.14,
        bandwidth=50e6,
        integration_time=10e-9,
        carrier=design_couplings.omega_r,
    )


@pytest.fixture(scope="session")
def commercial_chain(design_couplings):
    """T_N = 4 K, B = 10 MHz, tau = 50 ns."""
    return DetectionChain(
        noise_temperature=4.0,
        bandwidth=10e6,
        integration_time=50e-9,
        carrier=design_couplings.omega_r,
    )


def mhz(value):
    """Cyclic MHz -> angular rad/s, for terse test arithmetic."""
    return TWO_PI * value * 1e6


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240809)
