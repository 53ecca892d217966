"""Physical constants in Gaussian-CGS units.

Values are CODATA (via :mod:`scipy.constants`) converted from SI once at
import time. Energies are in erg, fields in gauss, lengths in cm.
"""

import math

import scipy.constants as _si

HBAR = _si.hbar * 1e7  # erg s
C = _si.c * 1e2  # cm / s
E_CHARGE = _si.e * _si.c * 10.0  # esu (statcoulomb), positive
M_ELECTRON = _si.m_e * 1e3  # g
M_PROTON = _si.m_p * 1e3  # g
M_NEUTRON = _si.m_n * 1e3  # g
K_BOLTZMANN = _si.k * 1e7  # erg / K
ALPHA = _si.alpha

ERG_PER_EV = _si.e * 1e7
WATT = 1e7  # erg / s

# eħ/2mc evaluated in CGS; agrees with CODATA (J/T * 1e3 = erg/G) to ~1e-9
MU_BOHR = E_CHARGE * HBAR / (2.0 * M_ELECTRON * C)
MU_NUCLEAR = E_CHARGE * HBAR / (2.0 * M_PROTON * C)

TWO_PI = 2.0 * math.pi
