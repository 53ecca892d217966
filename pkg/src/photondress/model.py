"""Domain types and unit conversions shared by every other module.

Everything internal is Gaussian-CGS with ħ explicit: energies in erg,
angular frequencies in rad/s, fields in gauss, wave vectors in 1/cm.
User-facing helpers convert from eV, μm, W/cm² and kelvin.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from . import constants as const
from .errors import DomainError, IncompleteParametrizationError

HalfInteger = Union[int, float, str, Fraction]

INTENSITY_CONVENTION = "I = c*H0**2/(8*pi)"

_HANDEDNESS_ALIASES = {
    "cw": "cw",
    "clockwise": "cw",
    "ccw": "ccw",
    "counterclockwise": "ccw",
    "anticlockwise": "ccw",
}

_REL_TOL = 1e-14


def half_integer(value: HalfInteger) -> Fraction:
    """Parse ``value`` (``1.5``, ``"3/2"``, ``Fraction(3, 2)``) as a half-integer."""
    try:
        frac = Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot read {value!r} as a half-integer") from exc
    if (2 * frac).denominator != 1:
        raise DomainError(f"{value!r} is not a multiple of 1/2")
    return frac


def _close(a: float, b: float, rtol: float = _REL_TOL) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b)) or a == b


# --- unit conversions -------------------------------------------------------


def wavelength_to_omega(wavelength_um: float) -> float:
    """Angular frequency (rad/s) of light with vacuum wavelength in μm."""
    if not wavelength_um > 0:
        raise DomainError(f"wavelength must be positive, got {wavelength_um!r}")
    return const.TWO_PI * const.C / (wavelength_um * 1e-4)


def omega_to_wavelength(omega: float) -> float:
    """Vacuum wavelength in μm for angular frequency ``omega``."""
    if not omega > 0:
        raise DomainError(f"angular frequency must be positive, got {omega!r}")
    return const.TWO_PI * const.C / omega * 1e4


def ev_to_erg(energy_ev: float) -> float:
    return energy_ev * const.ERG_PER_EV


def erg_to_ev(energy_erg: float) -> float:
    return energy_erg / const.ERG_PER_EV


def ev_to_omega(energy_ev: float) -> float:
    return energy_ev * const.ERG_PER_EV / const.HBAR


def omega_to_ev(omega: float) -> float:
    return omega * const.HBAR / const.ERG_PER_EV


def kelvin_to_erg(temperature_k: float) -> float:
    return temperature_k * const.K_BOLTZMANN


def erg_to_kelvin(energy_erg: float) -> float:
    return energy_erg / const.K_BOLTZMANN


def intensity_to_amplitude(intensity_wcm2: float) -> float:
    """Magnetic amplitude H0 (gauss) for an intensity in W/cm².

    Uses ``INTENSITY_CONVENTION``: I = c H0² / 8π.
    """
    if intensity_wcm2 < 0 or math.isnan(intensity_wcm2):
        raise DomainError(f"intensity must be non-negative, got {intensity_wcm2!r}")
    flux = intensity_wcm2 * const.WATT  # erg / (s cm²)
    return math.sqrt(8.0 * math.pi * flux / const.C)


def amplitude_to_intensity(h0: float) -> float:
    """Inverse of :func:`intensity_to_amplitude`, in W/cm²."""
    if h0 < 0 or math.isnan(h0):
        raise DomainError(f"amplitude must be non-negative, got {h0!r}")
    return const.C * h0 * h0 / (8.0 * math.pi) / const.WATT


def single_photon_amplitude(omega0: float, volume: float) -> float:
    """H̃0 = sqrt(2πħω0/V) in gauss for a quantization volume in cm³."""
    if not volume > 0:
        raise DomainError(f"volume must be positive, got {volume!r}")
    return math.sqrt(const.TWO_PI * const.HBAR * omega0 / volume)


# --- domain types -----------------------------------------------------------


@dataclass(frozen=True)
class PhotonField:
    """One circularly polarized mode along z.

    ``h_tilde`` is the single-photon field scale and ``h0`` the classical
    amplitude; when ``n0`` and ``h_tilde`` are both known they fix
    ``h0 = sqrt(2 n0) h_tilde``.
    """

    omega0: float
    handedness: str = "cw"
    n0: Optional[float] = None
    h_tilde: Optional[float] = None
    h0: Optional[float] = None
    volume: Optional[float] = None

    def __post_init__(self):
        if not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise DomainError(f"omega0 must be positive and finite, got {self.omega0!r}")
        hand = _HANDEDNESS_ALIASES.get(str(self.handedness).lower())
        if hand is None:
            raise DomainError(f"unknown handedness {self.handedness!r}")
        object.__setattr__(self, "handedness", hand)
        for name in ("n0", "h_tilde", "h0"):
            value = getattr(self, name)
            if value is not None:
                value = float(value)
                if not value >= 0 or not math.isfinite(value):
                    raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
                object.__setattr__(self, name, value)
        if self.volume is not None:
            scale = single_photon_amplitude(self.omega0, self.volume)
            if self.h_tilde is None:
                object.__setattr__(self, "h_tilde", scale)
            elif not _close(self.h_tilde, scale):
                raise DomainError("h_tilde disagrees with sqrt(2*pi*hbar*omega0/V)")
        if self.n0 is not None and self.h_tilde is not None and self.h0 is not None:
            if not _close(self.h0, math.sqrt(2.0 * self.n0) * self.h_tilde):
                raise DomainError(
                    f"h0={self.h0!r} is inconsistent with n0={self.n0!r}, "
                    f"h_tilde={self.h_tilde!r}"
                )

    @classmethod
    def fock(cls, omega0: float, n0: float, h_tilde: float, handedness: str = "cw"):
        """Field given by its occupation and single-photon scale; ``h0`` is filled in."""
        return classicalize(cls(omega0=omega0, n0=n0, h_tilde=h_tilde, handedness=handedness))

    @classmethod
    def classical(
        cls, omega0: float, h0: float, n0: Optional[float] = None, handedness: str = "cw"
    ):
        """Field given by its classical amplitude.

        With ``n0 > 0`` the single-photon scale is set to ``h0 / sqrt(2 n0)``.
        """
        h_tilde = None
        if n0 is not None and n0 > 0:
            h_tilde = h0 / math.sqrt(2.0 * n0)
        return cls(omega0=omega0, h0=h0, n0=n0, h_tilde=h_tilde, handedness=handedness)

    @property
    def k0(self) -> float:
        return self.omega0 / const.C

    @property
    def amplitude(self) -> float:
        """Classical amplitude H0, derived from (n0, h_tilde) when not stored."""
        if self.h0 is not None:
            return self.h0
        if self.n0 is not None and self.h_tilde is not None:
            return math.sqrt(2.0 * self.n0) * self.h_tilde
        raise IncompleteParametrizationError("field has neither h0 nor (n0, h_tilde)")

    def require_fock(self) -> Tuple[float, float]:
        """Return ``(n0, h_tilde)`` or raise if the Fock parametrization is incomplete."""
        if self.n0 is None or self.h_tilde is None:
            raise IncompleteParametrizationError(
                "operation needs the photon number n0 and single-photon amplitude h_tilde"
            )
        return self.n0, self.h_tilde

    def replace(self, **changes) -> "PhotonField":
        return dataclasses.replace(self, **changes)

    def flipped(self) -> "PhotonField":
        """Same mode with the opposite circular handedness."""
        return self.replace(handedness="ccw" if self.handedness == "cw" else "cw")


def classicalize(field: PhotonField) -> PhotonField:
    """Populate ``h0 = sqrt(2 n0) h_tilde``; idempotent."""
    n0, h_tilde = field.require_fock()
    return field.replace(h0=math.sqrt(2.0 * n0) * h_tilde)


@dataclass(frozen=True)
class Particle:
    """Particle with magnetic moment ``mu`` (erg/G) and total angular momentum ``j_total``.

    For charged particles ``mu_anomalous`` is the anomalous moment and the
    Bohr magneton is derived as e ħ / 2 m c with the sign of ``charge``.
    """

    mu: float
    mass: float
    j_total: HalfInteger = Fraction(1, 2)
    charge: float = 0.0
    mu_anomalous: float = 0.0
    k: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        j = half_integer(self.j_total)
        if j < Fraction(1, 2):
            raise DomainError(f"total angular momentum must be >= 1/2, got {j}")
        object.__setattr__(self, "j_total", j)
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise DomainError(f"mass must be positive, got {self.mass!r}")
        k = tuple(float(x) for x in self.k)
        if len(k) != 3:
            raise DomainError("wave vector needs three components")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "charge", float(self.charge))
        object.__setattr__(self, "mu_anomalous", float(self.mu_anomalous))

    @property
    def is_charged(self) -> bool:
        return self.charge != 0.0

    @property
    def mu_bohr(self) -> float:
        """Bohr magneton e ħ / 2 m c of this particle (zero when neutral)."""
        return self.charge * const.HBAR / (2.0 * self.mass * const.C)

    @property
    def kz(self) -> float:
        return self.k[2]

    @property
    def k_perp(self) -> float:
        return math.hypot(self.k[0], self.k[1])

    @property
    def kinetic_energy(self) -> float:
        kx, ky, kz = self.k
        return const.HBAR**2 * (kx * kx + ky * ky + kz * kz) / (2.0 * self.mass)

    def replace(self, **changes) -> "Particle":
        return dataclasses.replace(self, **changes)
