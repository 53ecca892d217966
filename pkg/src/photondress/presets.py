"""Named particle and field configurations used by the CLI.

Provenance of the numbers:

* neutron: moment -1.913 nuclear magnetons (CODATA -1.91304 rounded to the
  precision commonly quoted), CODATA neutron mass, spin 1/2.
* electron: CODATA electron mass and charge -e; Bohr magneton e ħ / 2 m c
  carries the sign of the charge; anomalous part is the one-loop Schwinger
  value (α/2π) μB.
* hydrogen: 1S atom treated as a neutral spin-1/2 particle whose moment is
  one Bohr magneton (nuclear moment neglected); mass m_p + m_e.  The
  accompanying field preset is a 1 μm laser at 1e8 W/cm².
"""

from __future__ import annotations

import math

from . import constants as const
from .model import Particle, intensity_to_amplitude, wavelength_to_omega

NEUTRON_MU_NUCLEAR = -1.913


def neutron(k=(0.0, 0.0, 0.0)) -> Particle:
    return Particle(
        mu=NEUTRON_MU_NUCLEAR * const.MU_NUCLEAR, mass=const.M_NEUTRON, j_total="1/2", k=k
    )


def electron(k=(0.0, 0.0, 0.0)) -> Particle:
    charge = -const.E_CHARGE
    mu_b = charge * const.HBAR / (2.0 * const.M_ELECTRON * const.C)
    mu_a = const.ALPHA / (2.0 * math.pi) * mu_b
    return Particle(
        mu=mu_b + mu_a,
        mass=const.M_ELECTRON,
        j_total="1/2",
        charge=charge,
        mu_anomalous=mu_a,
        k=k,
    )


def hydrogen(k=(0.0, 0.0, 0.0)) -> Particle:
    return Particle(mu=const.MU_BOHR, mass=const.M_PROTON + const.M_ELECTRON, j_total="1/2", k=k)


HYDROGEN_WAVELENGTH_UM = 1.0
HYDROGEN_INTENSITY_WCM2 = 1e8
# order of magnitude commonly quoted for this configuration, eV
HYDROGEN_QUOTED_SPLITTING_EV = 1e-4


def hydrogen_field_parameters():
    """(omega0, h0) of the hydrogen laser preset."""
    omega0 = wavelength_to_omega(HYDROGEN_WAVELENGTH_UM)
    return omega0, intensity_to_amplitude(HYDROGEN_INTENSITY_WCM2)


PARTICLES = {"neutron": neutron, "electron": electron, "hydrogen": hydrogen}
