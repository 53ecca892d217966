"""Closed forms, each checked against the block oracle before its own examples."""

import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from photondress import constants as const
from photondress import presets
from photondress.analytic import (
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
from photondress.errors import DomainError, ModelValidityError, ValidityWarning
from photondress.model import PhotonField
from photondress.oracle import charged_splitting_numeric, labeled_level
from photondress.verify import charged_deviation, fit_charged_trend

from conftest import HW, OMEGA0, classical_field, neutron_field

HALF = Fraction(1, 2)


def field_with_h0(h0, n0=None):
    return PhotonField.classical(OMEGA0, h0, n0=n0)


# --- spin-1/2: oracle first ---------------------------------------------------


@pytest.mark.parametrize("handedness", ["cw", "ccw"])
@pytest.mark.parametrize("g", [0.0, 1e-3, 0.3, 3.0])
@pytest.mark.parametrize("n0", [1, 10, 10**6])
@pytest.mark.parametrize("j", [HALF, -HALF])
def test_spin_half_matches_block(g, n0, j, handedness):
    p = presets.neutron(k=(0.0, 0.0, 1e-6 * const.M_NEUTRON * const.C / const.HBAR))
    f = neutron_field(g, n0, handedness)
    numeric = labeled_level(f, p, j)
    sol = dressed_spin_half(f, p, j)
    assert abs((numeric.offset - sol.offset) + (numeric.shift - sol.shift)) <= 1e-12 * max(abs(sol.energy), HW)
    keep = numeric.coefficient(sol.keep_state[0])
    flip = numeric.coefficient(sol.flip_state[0])
    sign = math.copysign(1.0, keep)
    assert sign * keep == pytest.approx(sol.c_keep, abs=1e-12)
    assert sign * flip == pytest.approx(sol.c_flip, abs=1e-12)


def test_spin_half_uncoupled():
    sol = dressed_spin_half(neutron_field(0.0, 5), presets.neutron(), HALF)
    assert sol.c_keep == 1.0 and sol.c_flip == 0.0
    assert sol.shift == 0.0
    assert sol.energy == pytest.approx(5 * HW, rel=1e-15)


def test_spin_half_normalized_and_rabi_consistent():
    f = neutron_field(0.7, 30)
    p = presets.neutron()
    for j, branch in ((HALF, 1), (-HALF, -1)):
        sol = dressed_spin_half(f, p, j)
        assert sol.c_keep**2 + sol.c_flip**2 == pytest.approx(1.0, abs=1e-15)
        assert sol.big_omega_pm == pytest.approx(rabi_frequency(f, p, branch), rel=1e-15)


def test_lower_flip_needs_a_photon():
    with pytest.raises(DomainError):
        dressed_spin_half(neutron_field(0.1, 0), presets.neutron(), -HALF)


def test_small_n0_flag():
    assert dressed_spin_half(neutron_field(0.1, 3), presets.neutron(), HALF).small_n0
    assert not dressed_spin_half(neutron_field(0.1, 300), presets.neutron(), HALF).small_n0


def test_omega_shifted_recoil():
    p = presets.neutron(k=(0, 0, 1e5))
    f = neutron_field(0.1, 10)
    mc = p.mass * const.C
    expected = OMEGA0 * (1 - const.HBAR * 1e5 / mc + const.HBAR * f.k0 / (2 * mc))
    assert omega_shifted(f, p, 1) == pytest.approx(expected, rel=1e-15)
    assert omega_shifted(f, p, 1, nonrelativistic=True) == OMEGA0


# --- classical limit and splitting ------------------------------------------


def test_exact_splitting_converges_to_classical_form():
    p = presets.neutron()
    h0 = 0.8 * HW / abs(p.mu)
    target = splitting_neutral(field_with_h0(h0), p).delta_eps
    devs = []
    for n0 in (1e2, 1e4, 1e6):
        f = field_with_h0(h0, n0)
        devs.append(abs(splitting_exact_spin_half(f, p, nonrelativistic=True) - target) / HW)
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-5


@pytest.mark.parametrize("x, expected", [(0.0, 0.0), (math.sqrt(3.0), 1.0), (1e-3, 5e-7)])
def test_splitting_neutral_examples(x, expected):
    res = splitting_neutral(classical_field(x), presets.neutron())
    assert res.delta_eps / HW == pytest.approx(expected, rel=1e-6, abs=1e-300)


def test_omega_classical_fixture():
    assert omega_classical(classical_field(math.sqrt(3.0)), presets.neutron()) == pytest.approx(2 * OMEGA0)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1e3), st.floats(min_value=1e-6, max_value=1e3))
def test_splitting_monotone_in_amplitude(a, b):
    lo, hi = sorted((a, b))
    p = presets.neutron()
    assert splitting_neutral(classical_field(lo), p).delta_eps <= splitting_neutral(classical_field(hi), p).delta_eps


def test_small_moment_limit():
    p = presets.neutron()
    f = classical_field(1e-3)
    ratio = splitting_neutral(f, p).delta_eps / p.mu**2
    assert ratio == pytest.approx(2 * f.amplitude**2 / HW, rel=1e-5)


# --- spin-J limit: oracle first -------------------------------------------------


@pytest.mark.parametrize("big_j", ["1", "3/2", "2", "5/2"])
@pytest.mark.parametrize("ratio", [0.1, 1.0])
def test_spin_j_limit_matches_block(big_j, ratio):
    p = presets.neutron().replace(j_total=big_j)
    f = field_with_h0(ratio * HW / abs(p.mu), 1e6)
    big = p.j_total
    for i in range(int(2 * big) + 1):
        j = -big + i
        numeric = labeled_level(f, p, j)
        closed = energies_spin_j_limit(f, p, j, relative=True)
        rel_numeric = (numeric.offset - p.kinetic_energy - 1e6 * HW) + numeric.shift
        assert abs(rel_numeric - closed) / HW <= 1e-4


def test_spin_j_half_agrees_with_spin_half_limit():
    p = presets.neutron()
    f = classical_field(0.6, n0=1e9)
    delta = energies_spin_j_limit(f, p, -HALF) - energies_spin_j_limit(f, p, HALF)
    assert delta == pytest.approx(splitting_neutral(f, p).delta_eps, rel=1e-9)


def test_spin_j_equal_spacing():
    p = presets.neutron().replace(j_total=2)
    f = classical_field(0.4, n0=1e6)
    e = [energies_spin_j_limit(f, p, j, relative=True) for j in range(-2, 3)]
    assert np.allclose(np.diff(e), np.diff(e)[0], rtol=1e-12)


def test_spin_j_regime_warning_and_override():
    p = presets.neutron().replace(j_total=2)
    f = classical_field(0.4, n0=50)
    with pytest.warns(ValidityWarning):
        energies_spin_j_limit(f, p, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        energies_spin_j_limit(f, p, 1, check_regime=False)


def test_spin_j_rejects_bad_label():
    with pytest.raises(DomainError):
        energies_spin_j_limit(classical_field(0.1), presets.neutron(), 1)


# --- charged particle: oracle first -------------------------------------------


def test_charged_numeric_converges_like_one_over_n0():
    a, d_inf = fit_charged_trend()
    assert a < 0 < d_inf
    observed = charged_deviation(1e8)
    assert abs(observed) <= 10 * abs(a / 1e8 + d_inf)
    assert abs(observed) <= 1e-6


def test_charged_floor_is_the_dropped_second_order_term():
    # the residual at large N0 scales like (p0 / m c)^4
    d1 = charged_deviation(1e8, 1e-2)
    d2 = charged_deviation(1e8, 5e-3)
    assert d1 / d2 == pytest.approx(16.0, rel=0.05)


def test_eq_vacuum_identity_symbolic():
    mu_a, mu_b, h, hw, e, m, c, hbar = sp.symbols("mu_a mu_B H hw e m c hbar", positive=True)
    mu = mu_a + mu_b
    inner = (mu * h) ** 2 - (hbar * e * h**2 / (m * c)) * (mu_a + mu_b / 2) + (hw / 2) ** 2
    inner = inner.subs(e, 2 * mu_b * m * c / hbar)
    assert sp.simplify(inner - ((mu_a * h) ** 2 + (hw / 2) ** 2)) == 0


def test_charged_reduces_to_vacuum_numerically(electron):
    for x in np.geomspace(1e-5, 1e-2, 7):
        f = field_with_h0(x * electron.mass * const.C * OMEGA0 / const.E_CHARGE)
        full = splitting_charged(f, electron).delta_eps
        vac = splitting_charged_vacuum(f, electron).delta_eps
        assert abs(full - vac) <= 1e-12 * HW


def test_charged_regime_guards(electron):
    p0 = lambda r: field_with_h0(r * electron.mass * const.C * OMEGA0 / const.E_CHARGE)
    with pytest.warns(ValidityWarning):
        splitting_charged(p0(0.05), electron)
    with pytest.raises(ModelValidityError):
        splitting_charged(p0(0.2), electron)
    splitting_charged(p0(0.2), electron, check_regime=False)
    assert momentum_rotating(p0(0.05), electron) / (electron.mass * const.C) == pytest.approx(0.05)


def test_charged_needs_charge():
    with pytest.raises(DomainError):
        splitting_charged(classical_field(0.1), presets.neutron())


def test_charged_numeric_matches_exact_neutral_form_without_spin_orbit(electron):
    # with the spin-orbit constants switched off the H' block is the neutral block
    f = classical_field(0.3, n0=1e5, mu=electron.mu)
    p = electron.replace(charge=electron.charge * 1e-40, mu_anomalous=0.0)
    assert charged_splitting_numeric(f, p) == pytest.approx(
        splitting_exact_spin_half(f, p, nonrelativistic=True), rel=1e-10
    )
