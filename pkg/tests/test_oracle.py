"""Numeric-oracle tests: the block builders against independent operator matrices."""

import math
from fractions import Fraction

import numpy as np
import pytest

from photondress import constants as const
from photondress import presets
from photondress.errors import DomainError, LabelingError
from photondress.oracle import (
    BlockMatrix,
    build_charged_block,
    build_spin_j_block,
    charged_level,
    charged_sector_block,
    charpoly_eigvals,
    label_states,
    labeled_level,
    operator_hamiltonian,
    perturbation_h2,
    sector_matrix,
    solve_block,
    spin_j_basis,
    spin_operators,
    windowed_level,
)

from conftest import HW, OMEGA0, classical_field, neutron_field

HALF = Fraction(1, 2)


def labels(big_j):
    big_j = Fraction(big_j)
    return [-big_j + i for i in range(int(2 * big_j) + 1)]


@pytest.mark.parametrize("big_j", ["1/2", "1", "3/2", "2", "5/2"])
def test_spin_operator_algebra(big_j):
    jp, jm, jz = spin_operators(Fraction(big_j))
    two_j = 2 * float(Fraction(big_j))
    # with J± = (Jx ± iJy)/2J: [J+, J-] = Jz / J²... scaled: (2J)² [J+, J-] = 2 Jz
    comm = (jp @ jm - jm @ jp) * two_j**2
    assert np.allclose(comm, 2.0 * jz)


@pytest.mark.parametrize("handedness", ["cw", "ccw"])
@pytest.mark.parametrize("big_j", ["1/2", "1", "3/2", "2"])
@pytest.mark.parametrize("g", [0.0, 0.2, 1.7])
def test_block_equals_operator_matrix(big_j, g, handedness):
    p = presets.neutron(k=(1e3, 0.0, 2e4)).replace(j_total=big_j)
    f = neutron_field(g, 12, handedness)
    for j in labels(big_j):
        block = build_spin_j_block(f, p, j)
        h, offset = operator_hamiltonian(f, p, block.basis)
        assert offset == block.offset
        assert np.max(np.abs(block.dense() - h)) <= 1e-15 * max(1.0, np.max(np.abs(h)))


def test_sectors_do_not_couple():
    p = presets.neutron().replace(j_total="3/2")
    f = neutron_field(0.8, 6)
    h, basis, bounds = sector_matrix(f, p, labels("3/2"))
    mask = np.zeros_like(h, dtype=bool)
    for a, b in zip(bounds[:-1], bounds[1:]):
        mask[a:b, a:b] = True
    assert np.all(h[~mask] == 0.0)
    assert h.shape[0] == len(basis)


@pytest.mark.parametrize(
    "j_sector, dim", [(1, 3), (0, 2), (-1, 1)]
)
def test_spin_one_vacuum_sector_sizes(j_sector, dim):
    # at N0 = 0 only states with non-negative photon number remain
    p = presets.neutron().replace(j_total=1)
    f = neutron_field(0.3, 0)
    basis = spin_j_basis(f, p, j_sector)
    assert len(basis) == dim
    assert all(N >= 0 for _, N in basis)


def test_spin_j_basis_rejects_bad_label():
    with pytest.raises(DomainError):
        spin_j_basis(neutron_field(0.1, 3), presets.neutron(), 1)


def test_charpoly_matches_solver(backend):
    p = presets.neutron().replace(j_total="5/2")
    block = build_spin_j_block(neutron_field(0.4, 1000), p, Fraction(1, 2))
    w = np.array([pair.shift for pair in solve_block(block, backend)])
    roots = charpoly_eigvals(block)
    assert np.max(np.abs(w - roots)) <= 1e-9 * np.max(np.abs(w))


def test_labels_are_a_permutation_of_the_bare_states(backend):
    p = presets.neutron().replace(j_total=2)
    block = build_spin_j_block(neutron_field(1.0, 50), p, 0)
    pairs = label_states(block, backend)
    assert sorted((pr.j, pr.n0) for pr in pairs) == sorted(block.basis)


def test_labeling_is_continuous_in_coupling():
    p = presets.neutron().replace(j_total="3/2")
    prev = None
    # μ H̃0 sqrt(N0) / ħ ω0 runs from 0 to 1 in small steps
    for g in np.linspace(0.0, 0.01, 11):
        level = labeled_level(neutron_field(g, 1e4), p, HALF)
        if prev is not None:
            assert abs(level.shift - prev) < 0.2 * HW
        prev = level.shift


def test_labeling_error_when_ramp_budget_too_small():
    # a near-degenerate pair at full coupling with a single-step budget cannot be confirmed
    block = BlockMatrix(
        np.array([0.0, 1e-9, 2e-9]), np.array([1.0, 1.0]), ((HALF, 0.0), (-HALF, 1.0), (HALF, 2.0)), 0.0, 0.0
    )
    with pytest.raises(LabelingError):
        label_states(block, ramp_start=1, ramp_max=1)


def test_charged_block_reduces_to_neutral_for_tiny_charge():
    e = presets.electron()
    tiny = e.replace(charge=e.charge * 1e-30, mu_anomalous=0.0)
    f = classical_field(0.3, n0=1e6, mu=e.mu)
    neutral = build_spin_j_block(f, tiny, HALF, nonrelativistic=True)
    charged = charged_sector_block(f, tiny, HALF, nonrelativistic=True)
    assert np.allclose(charged.dense(), neutral.dense(), rtol=0, atol=1e-12 * HW)


@pytest.mark.parametrize("j", [HALF, -HALF])
def test_charged_ccw_mirrors_cw(j):
    e = presets.electron()
    f = classical_field(0.5, n0=1e5, mu=e.mu)
    a = charged_level(f, e, j)
    b = charged_level(f.flipped(), e, -j)
    assert a.energy == b.energy


def test_windowed_h2_matches_second_order_perturbation():
    e = presets.electron(k=(2e5, 0.0, 0.0))
    f = classical_field(0.2, n0=1e4, mu=e.mu)
    f = f.replace(h0=None)
    for j in (HALF, -HALF):
        level = charged_level(f, e, j)
        second = perturbation_h2(f, e, level)
        exact = windowed_level(f, e, level, window=5)
        e0 = level.offset + level.shift
        assert exact - e0 == pytest.approx(second, rel=1e-5)


def test_h2_vanishes_without_transverse_momentum():
    e = presets.electron()
    f = classical_field(0.2, n0=100, mu=e.mu).replace(h0=None)
    assert perturbation_h2(f, e, charged_level(f, e, HALF)) == 0.0
    win = build_charged_block(f, e, 2)
    assert not np.any(win.h_double_prime)
