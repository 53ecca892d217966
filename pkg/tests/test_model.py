import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from photondress import constants as const
from photondress.errors import DomainError, IncompleteParametrizationError
from photondress.model import (
    Particle,
    PhotonField,
    amplitude_to_intensity,
    classicalize,
    erg_to_ev,
    erg_to_kelvin,
    ev_to_erg,
    ev_to_omega,
    half_integer,
    intensity_to_amplitude,
    kelvin_to_erg,
    omega_to_ev,
    omega_to_wavelength,
    single_photon_amplitude,
    wavelength_to_omega,
)


def test_intensity_convention_round_trip_and_value():
    h0 = intensity_to_amplitude(1e8)
    # I = c H0² / 8π with I in erg/(s cm²)
    assert h0 == pytest.approx(math.sqrt(8.0 * math.pi * 1e8 * 1e7 / const.C), rel=1e-14)
    assert amplitude_to_intensity(h0) == pytest.approx(1e8, rel=1e-14)


@given(st.floats(min_value=1e-3, max_value=1e3))
def test_wavelength_round_trip(lam):
    assert omega_to_wavelength(wavelength_to_omega(lam)) == pytest.approx(lam, rel=1e-14)


@given(st.floats(min_value=1e-9, max_value=1e6))
def test_energy_round_trips(x):
    assert erg_to_ev(ev_to_erg(x)) == pytest.approx(x, rel=1e-14)
    assert omega_to_ev(ev_to_omega(x)) == pytest.approx(x, rel=1e-14)
    assert erg_to_kelvin(kelvin_to_erg(x)) == pytest.approx(x, rel=1e-14)


def test_one_micron_photon_energy():
    assert omega_to_ev(wavelength_to_omega(1.0)) == pytest.approx(1.23984, rel=1e-5)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
def test_wavelength_domain(bad):
    with pytest.raises(DomainError):
        wavelength_to_omega(bad)


def test_negative_intensity_rejected():
    with pytest.raises(DomainError):
        intensity_to_amplitude(-1.0)


@pytest.mark.parametrize("text, value", [("1/2", Fraction(1, 2)), ("3/2", Fraction(3, 2)), (2, Fraction(2)), (-0.5, Fraction(-1, 2))])
def test_half_integer(text, value):
    assert half_integer(text) == value


@pytest.mark.parametrize("bad", ["1/3", 0.25, "x"])
def test_half_integer_rejects(bad):
    with pytest.raises(DomainError):
        half_integer(bad)


def test_fock_field_fills_amplitude():
    f = PhotonField.fock(1e15, 50, 2.0)
    assert f.h0 == pytest.approx(math.sqrt(100) * 2.0)
    assert classicalize(f) == f


def test_classical_field_derives_single_photon_scale():
    f = PhotonField.classical(1e15, 10.0, n0=8)
    assert f.h_tilde == pytest.approx(10.0 / 4.0)
    assert f.require_fock() == (8.0, pytest.approx(2.5))


def test_classical_without_n0_is_incomplete():
    f = PhotonField.classical(1e15, 10.0)
    assert f.amplitude == 10.0
    with pytest.raises(IncompleteParametrizationError):
        f.require_fock()


def test_inconsistent_parametrization_rejected():
    with pytest.raises(DomainError):
        PhotonField(omega0=1e15, n0=5, h_tilde=3.0, h0=1.0)


def test_volume_sets_single_photon_amplitude():
    f = PhotonField(omega0=1e15, n0=4, volume=1.0)
    assert f.h_tilde == pytest.approx(single_photon_amplitude(1e15, 1.0))
    assert f.h_tilde == pytest.approx(math.sqrt(2.0 * math.pi * const.HBAR * 1e15))


@pytest.mark.parametrize("alias, canonical", [("cw", "cw"), ("CCW", "ccw"), ("clockwise", "cw"), ("counterclockwise", "ccw")])
def test_handedness_aliases(alias, canonical):
    assert PhotonField(omega0=1.0, handedness=alias).handedness == canonical


def test_flipped():
    f = PhotonField(omega0=1.0)
    assert f.flipped().handedness == "ccw"
    assert f.flipped().flipped() == f


def test_particle_properties():
    p = Particle(mu=1.0, mass=2.0, charge=-const.E_CHARGE, k=(3.0, 4.0, 5.0))
    assert p.j_total == Fraction(1, 2)
    assert p.is_charged
    assert p.k_perp == pytest.approx(5.0)
    assert p.kz == 5.0
    assert p.kinetic_energy == pytest.approx(const.HBAR**2 * 50.0 / 4.0)
    assert p.mu_bohr == pytest.approx(-const.E_CHARGE * const.HBAR / (2.0 * 2.0 * const.C))


@pytest.mark.parametrize("kwargs", [{"mass": 0.0}, {"j_total": 0}, {"k": (1.0, 2.0)}])
def test_particle_validation(kwargs):
    base = {"mu": 1.0, "mass": 1.0}
    base.update(kwargs)
    with pytest.raises(DomainError):
        Particle(**base)
