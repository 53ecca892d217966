"""Dressed states of a magnetic moment in a quantized circularly polarized photon mode."""

__version__ = "0.1.0"

from .analytic import (
    SpinHalfSolution,
    SplittingResult,
    dressed_spin_half,
    energies_spin_j_limit,
    momentum_rotating,
    omega_classical,
    omega_shifted,
    rabi_frequency,
    splitting_charged,
    splitting_charged_vacuum,
    splitting_exact_spin_half,
    splitting_neutral,
)
from .errors import (
    DegeneratePerturbationError,
    DomainError,
    IncompleteParametrizationError,
    LabelingError,
    ModelValidityError,
    ValidityWarning,
)
from .model import Particle, PhotonField, classicalize
from .observables import (
    MagnetizationResult,
    SpectralLine,
    magnetization,
    matrix_elements,
    selection_rule_check,
    spin_expectation,
    transition_spectrum,
)

__all__ = [
    "DegeneratePerturbationError",
    "DomainError",
    "IncompleteParametrizationError",
    "LabelingError",
    "MagnetizationResult",
    "ModelValidityError",
    "Particle",
    "PhotonField",
    "SpectralLine",
    "SpinHalfSolution",
    "SplittingResult",
    "ValidityWarning",
    "classicalize",
    "dressed_spin_half",
    "energies_spin_j_limit",
    "magnetization",
    "matrix_elements",
    "momentum_rotating",
    "omega_classical",
    "omega_shifted",
    "rabi_frequency",
    "selection_rule_check",
    "spin_expectation",
    "splitting_charged",
    "splitting_charged_vacuum",
    "splitting_exact_spin_half",
    "splitting_neutral",
    "transition_spectrum",
]
