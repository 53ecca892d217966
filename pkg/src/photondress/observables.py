"""Spin orientation, magnetodipole spectrum and magnetization of dressed particles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import constants as const
from .analytic import (
    SpinHalfSolution,
    dressed_spin_half,
    energies_spin_j_limit,
    omega_classical,
    splitting_neutral,
)
from .errors import DomainError
from .model import Particle, PhotonField

HALF = Fraction(1, 2)
CHANNELS = ("e+", "e-", "ez")
_MIRROR_CHANNEL = {"e+": "e-", "e-": "e+", "ez": "ez"}

# (family, upper-sign transition, lower-sign transition, channel for upper, for lower)
# transitions are ((j_initial, dN_initial), (j_final, dN_final)) in the cw frame
_FAMILIES = (
    (1, ((HALF, 0), (HALF, -1)), ((-HALF, 0), (-HALF, 1)), "e-", "e+"),
    (2, ((HALF, 0), (-HALF, 0)), ((-HALF, 0), (HALF, 0)), "e-", "e+"),
    (3, ((HALF, 0), (-HALF, 2)), ((-HALF, 0), (HALF, -2)), "e+", "e-"),
    (4, ((HALF, 0), (-HALF, 1)), ((-HALF, 0), (HALF, -1)), "ez", "ez"),
)


@dataclass(frozen=True)
class SpectralLine:
    """One magnetodipole transition between dressed levels ``(j, N0 + dN)``."""

    initial: Tuple[Fraction, int]
    final: Tuple[Fraction, int]
    frequency: float  # rad/s
    element_magnitude: float  # erg/G
    polarization_channel: str
    delta_lz: int
    family: int
    kind: str  # "scattering" or "new"


@dataclass(frozen=True)
class ElementFamily:
    family: int
    magnitude: float  # erg/G
    transitions: Tuple[Tuple[Tuple[Fraction, int], Tuple[Fraction, int], str], ...]


@dataclass(frozen=True)
class MagnetizationResult:
    magnitude: float  # erg/(G cm³); signed with μ
    direction: int  # +1 for +e_z, -1 for -e_z
    density: float
    temperature: float  # erg
    delta_eps: float
    big_omega: float
    saturated: bool = False
    statistics: str = "nondegenerate"


@dataclass(frozen=True)
class SelectionReport:
    passed: bool
    violations: Tuple[Tuple[str, object], ...] = ()


def spin_expectation(solution: SpinHalfSolution) -> np.ndarray:
    """Average spin vector of a dressed spin-1/2 state; only the z part survives."""
    keep_sign = 1.0 if solution.keep_state[0] > 0 else -1.0
    return np.array([0.0, 0.0, keep_sign * solution.omega_pm / solution.big_omega_pm])


def _mirror(field: PhotonField) -> int:
    return 1 if field.handedness == "cw" else -1


def _lz(field: PhotonField, state: Tuple[Fraction, int]) -> Fraction:
    j, dn = state
    # photons carry +1 (cw) or -1 (ccw) units of angular momentum along z
    return j + _mirror(field) * dn


def matrix_elements(field: PhotonField, particle: Particle) -> List[ElementFamily]:
    """The four nonzero magnetodipole element magnitudes in the intensive limit.

    Magnitudes, in units of |μ|, with Ω from the classical amplitude:
    sqrt(Ω²-ω0²)/(√2 Ω), (Ω+ω0)/(√2 Ω), (Ω-ω0)/(√2 Ω), sqrt(Ω²-ω0²)/(2 Ω).
    """
    w0 = field.omega0
    coupling = abs(2.0 * particle.mu * field.amplitude / const.HBAR)  # sqrt(Ω² - ω0²)
    big = math.sqrt(coupling * coupling + w0 * w0)
    minus = coupling * coupling / (big + w0)
    root2 = math.sqrt(2.0)
    ratios = (
        coupling / (root2 * big),
        (big + w0) / (root2 * big),
        minus / (root2 * big),
        coupling / (2.0 * big),
    )
    sign = _mirror(field)
    out = []
    for (family, upper, lower, ch_up, ch_low), ratio in zip(_FAMILIES, ratios):
        transitions = []
        for (ini, fin), ch in ((upper, ch_up), (lower, ch_low)):
            if sign < 0:
                ini = (-ini[0], ini[1])
                fin = (-fin[0], fin[1])
                ch = _MIRROR_CHANNEL[ch]
            transitions.append((ini, fin, ch))
        out.append(ElementFamily(family, abs(particle.mu) * ratio, tuple(transitions)))
    return out


def _level_shift(field, particle, j, dn, regime):
    """Energy of level (j, N0 + dN) minus (kinetic + N0 ħ ω0)."""
    hw = const.HBAR * field.omega0
    if regime == "intensive":
        return dn * hw + energies_spin_j_limit(field, particle, j, check_regime=False, relative=True)
    if regime == "exact":
        n0, h_tilde = field.require_fock()
        shifted = field.replace(n0=n0 + dn, h0=None)
        return dn * hw + dressed_spin_half(shifted, particle, j, nonrelativistic=True).shift
    raise DomainError(f"unknown regime {regime!r}")


def transition_spectrum(
    field: PhotonField,
    particle: Particle,
    from_ground: bool = True,
    regime: str = "intensive",
) -> List[SpectralLine]:
    """Magnetodipole lines between dressed spin-1/2 levels, ascending in frequency.

    Frequencies are energy differences of the dressed levels with recoil
    neglected. ``regime="intensive"`` uses Ω from the classical amplitude
    for every level; ``regime="exact"`` uses the photon-number dependent
    Ω± of each level (needs ``n0`` and ``h_tilde``).
    """
    lines = []
    for fam in matrix_elements(field, particle):
        transitions = fam.transitions[:1] if from_ground else fam.transitions
        for ini, fin, channel in transitions:
            e_ini = _level_shift(field, particle, ini[0], ini[1], regime)
            e_fin = _level_shift(field, particle, fin[0], fin[1], regime)
            lines.append(
                SpectralLine(
                    initial=ini,
                    final=fin,
                    frequency=abs(e_fin - e_ini) / const.HBAR,
                    element_magnitude=fam.magnitude,
                    polarization_channel=channel,
                    delta_lz=int(_lz(field, fin) - _lz(field, ini)),
                    family=fam.family,
                    kind="scattering" if fam.family == 1 else "new",
                )
            )
    lines.sort(key=lambda ln: (ln.frequency, ln.family, ln.initial[0]))
    return lines


def figure_arrows(lines: Sequence[SpectralLine]) -> List[SpectralLine]:
    """The ground-state lines at the three new frequencies Ω, Ω - ω0, Ω + ω0."""
    return [ln for ln in lines if ln.kind == "new"]


def intensive_state(
    field: PhotonField, particle: Particle, j: Fraction, dn: int = 0
) -> Dict[Tuple[Fraction, float], float]:
    """Dressed spin-1/2 state ``(j, N0 + dN)`` as ``{(S_z, N): amplitude}``.

    Coefficients use Ω of the classical amplitude and ω± -> ω0.
    """
    n0 = field.n0 if field.n0 is not None else 0.0
    w0 = field.omega0
    coupling = 2.0 * particle.mu * field.amplitude / const.HBAR
    big = math.sqrt(coupling * coupling + w0 * w0)
    keep = math.sqrt((big + w0) / (2.0 * big))
    flip = math.sqrt(coupling * coupling / (big + w0) / (2.0 * big))
    sigma = (1 if j > 0 else -1) * _mirror(field)
    sign_mu = -1.0 if particle.mu < 0 else 1.0
    photons = n0 + dn
    spin = Fraction(j)
    return {
        (spin, photons): keep,
        (-spin, photons + sigma): sigma * sign_mu * flip,
    }


def magnetization(
    field: PhotonField, particle: Particle, density: float, temperature: float
) -> MagnetizationResult:
    """Equilibrium magnetization of a nondegenerate gas: (μ n ω0/Ω) tanh(Δε / 2T) along ±e_z.

    ``temperature`` is in erg (k_B T). At ``temperature == 0`` the
    saturated value μ n ω0 / Ω is returned with ``saturated=True``.
    """
    if density < 0 or math.isnan(density):
        raise DomainError(f"density must be non-negative, got {density!r}")
    if temperature < 0 or math.isnan(temperature):
        raise DomainError(f"temperature must be non-negative, got {temperature!r}")
    split = splitting_neutral(field, particle)
    big = omega_classical(field, particle)
    saturated = temperature == 0
    polarization = 1.0 if saturated else math.tanh(split.delta_eps / (2.0 * temperature))
    value = particle.mu * density * field.omega0 / big * polarization
    return MagnetizationResult(
        magnitude=value,
        direction=_mirror(field),
        density=density,
        temperature=temperature,
        delta_eps=split.delta_eps,
        big_omega=big,
        saturated=saturated,
    )


def candidate_elements(
    field: PhotonField, particle: Particle, max_photon_shift: int = 3, tol: float = 1e-12
) -> List[SpectralLine]:
    """Every transition out of (±1/2, N0) up to ``max_photon_shift`` photons, per channel.

    Element magnitudes come from contracting explicit state vectors with the
    spin operators, so lines violating the selection rule show up here with
    their (vanishing) magnitude.
    """
    from .oracle import dipole_contraction

    lines = []
    for j_ini in (HALF, -HALF):
        ket = intensive_state(field, particle, j_ini)
        for j_fin in (HALF, -HALF):
            for dn in range(-max_photon_shift, max_photon_shift + 1):
                if (field.n0 or 0) + dn < 1 or (j_fin == j_ini and dn == 0):
                    continue
                bra = intensive_state(field, particle, j_fin, dn)
                for channel in CHANNELS:
                    value = dipole_contraction(bra, ket, channel, particle.mu)
                    if value <= tol * abs(particle.mu):
                        value = 0.0
                    lines.append(
                        SpectralLine(
                            initial=(j_ini, 0),
                            final=(j_fin, dn),
                            frequency=float("nan"),
                            element_magnitude=value,
                            polarization_channel=channel,
                            delta_lz=int(_lz(field, (j_fin, dn)) - _lz(field, (j_ini, 0))),
                            family=0,
                            kind="candidate",
                        )
                    )
    return lines


def selection_rule_check(lines: Sequence[SpectralLine]) -> SelectionReport:
    """Nonzero elements only between levels whose l_z differ by -1, 0 or +1."""
    violations = []
    for ln in lines:
        if ln.element_magnitude > 0 and abs(ln.delta_lz) > 1:
            violations.append(("nonzero element with |Δl_z| > 1", ln))
    return SelectionReport(not violations, tuple(violations))
