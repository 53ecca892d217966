import math

import pytest

from photondress import constants as const
from photondress import kernels, presets
from photondress.model import PhotonField

OMEGA0 = const.ERG_PER_EV / const.HBAR  # 1 eV photons
HW = const.HBAR * OMEGA0

BACKENDS = ["numpy"] + (["numba"] if kernels.USE_NUMBA else [])


def neutron_field(g_over_w, n0, handedness="cw", omega0=OMEGA0):
    """Fock field with μ H̃0 / ħ = g_over_w · ω0 for the neutron moment."""
    mu = abs(presets.neutron().mu)
    return PhotonField.fock(omega0, n0, g_over_w * const.HBAR * omega0 / mu, handedness)


def classical_field(x, n0=None, handedness="cw", mu=None):
    """Classical field with 2 μ H0 / ħ ω0 = x."""
    mu = abs(presets.neutron().mu) if mu is None else abs(mu)
    return PhotonField.classical(OMEGA0, x * HW / (2.0 * mu), n0=n0, handedness=handedness)


@pytest.fixture
def neutron():
    return presets.neutron()


@pytest.fixture
def electron():
    return presets.electron()


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    kernels.warmup()


def rel(a, b, scale=None):
    scale = max(abs(b), 1e-300) if scale is None else scale
    return abs(a - b) / scale


__all__ = ["OMEGA0", "HW", "neutron_field", "classical_field", "rel", "math"]


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
