"""Closed-form dressed states, energies and spin splittings.

Spin-1/2 results are exact for the single-mode Hamiltonian (including the
photon-recoil terms in ω±). The arbitrary-J energies and the splitting
formulas hold in the intensive, nonrelativistic regime.

Counterclockwise polarization is handled by the exact mirror symmetry of the
model: the ccw state labelled ``j`` has the energy of the cw state ``-j`` and
the opposite spin orientation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Tuple

from . import constants as const
from .errors import DomainError, ModelValidityError, ValidityWarning
from .model import HalfInteger, Particle, PhotonField, half_integer

HALF = Fraction(1, 2)
# below this occupation the vacuum modes of the opposite handedness matter
SMALL_N0_WARN = 10.0
INTENSIVE_FACTOR = 100
P0_WARN = 0.01
P0_LIMIT = 0.1


@dataclass(frozen=True)
class SpinHalfSolution:
    """Dressed spin-1/2 state: ``c_keep |keep_state> + c_flip |flip_state>``.

    States are ``(S_z, N)`` pairs. ``energy == offset + shift`` where
    ``offset`` is the bare kinetic plus field energy; ``shift`` is kept
    separately so that level differences at huge N0 lose no precision.
    """

    j: Fraction
    energy: float
    offset: float
    shift: float
    c_keep: float
    c_flip: float
    omega_pm: float
    big_omega_pm: float
    keep_state: Tuple[Fraction, float]
    flip_state: Tuple[Fraction, float]
    handedness: str = "cw"
    small_n0: bool = False


@dataclass(frozen=True)
class SplittingResult:
    delta_eps: float  # erg
    big_omega: float  # rad/s
    kind: str
    inputs: Dict[str, float] = dc_field(default_factory=dict)


def _sign(x: float) -> float:
    return -1.0 if x < 0 else 1.0


def _rabi_parts(coupling_sq: float, omega: float):
    """Return (Ω, Ω+ω, Ω-ω) for Ω = sqrt(coupling_sq + ω²) without cancellation."""
    big = math.sqrt(coupling_sq + omega * omega)
    if omega >= 0:
        plus = big + omega
        minus = coupling_sq / plus if plus > 0 else 0.0
    else:
        minus = big - omega
        plus = coupling_sq / minus
    return big, plus, minus


def _sqrt_minus_base(coupling_sq: float, base: float) -> float:
    """sqrt(coupling_sq + base²) - |base|, stable for small coupling."""
    root = math.sqrt(coupling_sq + base * base)
    denom = root + abs(base)
    return coupling_sq / denom if denom > 0 else 0.0


def _spin_sign(j: Fraction) -> int:
    if j == HALF:
        return 1
    if j == -HALF:
        return -1
    raise DomainError(f"spin-1/2 label must be +1/2 or -1/2, got {j}")


def _require_spin_half(particle: Particle):
    if particle.j_total != HALF:
        raise DomainError(f"closed forms need J = 1/2, particle has J = {particle.j_total}")


def omega_shifted(
    field: PhotonField, particle: Particle, l: int, nonrelativistic: bool = False
) -> float:
    """ω_l = ω0 (1 - ħ k_z / m c + l ħ k0 / 2 m c); ω± are l = ±1."""
    if nonrelativistic:
        return field.omega0
    mc = particle.mass * const.C
    return field.omega0 * (
        1.0 - const.HBAR * particle.kz / mc + l * const.HBAR * field.k0 / (2.0 * mc)
    )


def _handedness_sign(field: PhotonField) -> int:
    return 1 if field.handedness == "cw" else -1


def rabi_frequency(
    field: PhotonField, particle: Particle, branch: int, nonrelativistic: bool = False
) -> float:
    """Ω± = sqrt(8 (N0 + 1/2 ± 1/2) (μ H̃0/ħ)² + ω±²) for ``branch`` = ±1."""
    if branch not in (1, -1):
        raise DomainError(f"branch must be +1 or -1, got {branch!r}")
    n0, h_tilde = field.require_fock()
    g = particle.mu * h_tilde / const.HBAR
    photons = n0 + 0.5 + 0.5 * branch
    omega = omega_shifted(field, particle, branch, nonrelativistic)
    return math.sqrt(8.0 * photons * g * g + omega * omega)


def dressed_spin_half(
    field: PhotonField,
    particle: Particle,
    j: HalfInteger,
    nonrelativistic: bool = False,
) -> SpinHalfSolution:
    """Exact dressed state and energy of a spin-1/2 moment in the mode."""
    _require_spin_half(particle)
    j = half_integer(j)
    # ccw states mirror cw states with the opposite label
    sigma = _spin_sign(j) * _handedness_sign(field)
    n0, h_tilde = field.require_fock()
    if sigma < 0 and n0 == 0:
        raise DomainError("the lower-spin-flip partner would need photon number -1 at n0 = 0")

    g = particle.mu * h_tilde / const.HBAR
    photons = n0 + 0.5 + 0.5 * sigma
    omega = omega_shifted(field, particle, sigma, nonrelativistic)
    big, plus, minus = _rabi_parts(8.0 * photons * g * g, omega)
    if big == 0:
        raise DomainError("ω± and the coupling both vanish; state is undefined")
    c_keep = math.sqrt(plus / (2.0 * big))
    c_flip = sigma * _sign(particle.mu) * math.sqrt(minus / (2.0 * big))

    offset = particle.kinetic_energy + n0 * (const.HBAR * field.omega0)
    # σ ħ(ω - Ω)/2 == -σ ħ (Ω - ω)/2, written through the stable difference
    shift = -sigma * const.HBAR * minus / 2.0
    spin_keep = j
    spin_flip = -j
    flip_photons = n0 + sigma
    return SpinHalfSolution(
        j=j,
        energy=offset + shift,
        offset=offset,
        shift=shift,
        c_keep=c_keep,
        c_flip=c_flip,
        omega_pm=omega,
        big_omega_pm=big,
        keep_state=(spin_keep, n0),
        flip_state=(spin_flip, flip_photons),
        handedness=field.handedness,
        small_n0=n0 < SMALL_N0_WARN,
    )


def omega_classical(field: PhotonField, particle: Particle) -> float:
    """Ω = sqrt((2 μ H0 / ħ)² + ω0²)."""
    x = 2.0 * particle.mu * field.amplitude / const.HBAR
    return math.sqrt(x * x + field.omega0**2)


def _echo(field: PhotonField, particle: Particle) -> Dict[str, float]:
    return {
        "mu": particle.mu,
        "h0": field.amplitude,
        "omega0": field.omega0,
        "charge": particle.charge,
        "mu_anomalous": particle.mu_anomalous,
        "mass": particle.mass,
    }


def splitting_neutral(field: PhotonField, particle: Particle) -> SplittingResult:
    """Δε = sqrt((2 μ H0)² + (ħ ω0)²) - ħ ω0."""
    coupling = 2.0 * particle.mu * field.amplitude
    delta = _sqrt_minus_base(coupling * coupling, const.HBAR * field.omega0)
    return SplittingResult(delta, omega_classical(field, particle), "neutral", _echo(field, particle))


def energies_spin_j_limit(
    field: PhotonField,
    particle: Particle,
    j: HalfInteger,
    check_regime: bool = True,
    relative: bool = False,
) -> float:
    """Intensive-limit energy of the level labelled ``j``.

    ε = ħ²k²/2m + (N0 + j) ħ ω0 - j sqrt((μ H0 / J)² + (ħ ω0)²).
    With ``relative=True`` the bare part ħ²k²/2m + N0 ħ ω0 is left out.
    """
    big_j = particle.j_total
    j = half_integer(j)
    if abs(j) > big_j or (big_j - j).denominator != 1:
        raise DomainError(f"j = {j} is not one of -J..J for J = {big_j}")
    n0 = field.n0
    if check_regime and n0 is not None and n0 < INTENSIVE_FACTOR * (2 * big_j + 1):
        warnings.warn(
            f"n0 = {n0:g} is not large compared with 2J+1 = {2 * big_j + 1}",
            ValidityWarning,
            stacklevel=2,
        )
    # ccw mirrors cw with j -> -j
    jj = float(j) * _handedness_sign(field)
    hw = const.HBAR * field.omega0
    coupling = particle.mu * field.amplitude / float(big_j)
    # j ħω0 - j sqrt(c² + ħ²ω0²) = -j (sqrt(...) - ħω0)
    shift = -jj * _sqrt_minus_base(coupling * coupling, hw)
    if relative:
        return shift
    bare = particle.kinetic_energy + (n0 or 0.0) * hw
    return bare + shift


def _check_charged(field: PhotonField, particle: Particle, check_regime: bool) -> float:
    if not particle.is_charged:
        raise DomainError("charged-particle formula needs a nonzero charge")
    ratio = momentum_rotating(field, particle) / (particle.mass * const.C)
    if check_regime:
        if ratio >= P0_LIMIT:
            raise ModelValidityError(f"p0/mc = {ratio:.3g} is not small")
        if ratio > P0_WARN:
            warnings.warn(f"p0/mc = {ratio:.3g} approaches the regime limit", ValidityWarning, stacklevel=3)
    return ratio


def splitting_charged(
    field: PhotonField, particle: Particle, check_regime: bool = True
) -> SplittingResult:
    """Splitting of a free charged spin-1/2 particle including the spin-orbit term.

    Δε = 2 sqrt((μH0)² - (ħ e H0²/mc)(μa + μB/2) + (ħω0/2)²) - ħω0.
    """
    _check_charged(field, particle, check_regime)
    h0 = field.amplitude
    hw = const.HBAR * field.omega0
    mu_b = particle.mu_bohr
    spin_orbit = const.HBAR * particle.charge * h0 * h0 / (particle.mass * const.C)
    interaction = (particle.mu * h0) ** 2 - spin_orbit * (particle.mu_anomalous + 0.5 * mu_b)
    radicand = interaction + 0.25 * hw * hw
    if radicand < 0:
        raise ModelValidityError("negative radicand: parameters outside the model's regime")
    root = math.sqrt(radicand)
    # 2 sqrt(X + b²/4) - b == 4X / (2 sqrt(X + b²/4) + b)
    delta = 4.0 * interaction / (2.0 * root + hw)
    big_omega = 2.0 * root / const.HBAR
    return SplittingResult(delta, big_omega, "charged", _echo(field, particle))


def splitting_charged_vacuum(
    field: PhotonField, particle: Particle, check_regime: bool = True
) -> SplittingResult:
    """Δε = sqrt((2 μa H0)² + (ħω0)²) - ħω0: only the anomalous moment survives."""
    _check_charged(field, particle, check_regime)
    coupling = 2.0 * particle.mu_anomalous * field.amplitude
    hw = const.HBAR * field.omega0
    delta = _sqrt_minus_base(coupling * coupling, hw)
    big_omega = math.sqrt(coupling * coupling + hw * hw) / const.HBAR
    return SplittingResult(delta, big_omega, "vacuum", _echo(field, particle))


def momentum_rotating(field: PhotonField, particle: Particle) -> float:
    """p0 = |e| H0 / ω0, momentum of the particle's circular motion in the wave."""
    if not particle.is_charged:
        raise DomainError("rotation momentum is defined for charged particles only")
    return abs(particle.charge) * field.amplitude / field.omega0


def splitting_exact_spin_half(
    field: PhotonField, particle: Particle, nonrelativistic: bool = False
) -> float:
    """ε(-1/2, N0) - ε(+1/2, N0) from the exact spin-1/2 energies (erg)."""
    lower = dressed_spin_half(field, particle, HALF, nonrelativistic)
    upper = dressed_spin_half(field, particle, -HALF, nonrelativistic)
    return (upper.offset - lower.offset) + (upper.shift - lower.shift)
