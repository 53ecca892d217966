"""Finite-block diagonalization used as ground truth for the closed forms.

The particle-photon Hamiltonian conserves l_z = J_z + N (cw) or N - J_z
(ccw), so each sector is a finite real symmetric tridiagonal matrix over
states ``|n, N>``. All matrices are stored relative to an ``offset``
(kinetic energy plus N0 ħ ω0) so that eigenvectors at N0 ~ 1e8 keep full
precision; absolute energies are ``offset + eigenvalue``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import constants as const
from . import kernels
from .analytic import omega_shifted
from .errors import (
    DegeneratePerturbationError,
    DomainError,
    LabelingError,
    ValidityWarning,
)
from .model import HalfInteger, Particle, PhotonField, half_integer

HALF = Fraction(1, 2)
OVERLAP_THRESHOLD = 1.0 / math.sqrt(2.0)
RAMP_START = 8
RAMP_MAX = 2**14

BasisState = Tuple[Fraction, float]  # (J_z projection n, photon number N)


@dataclass(frozen=True)
class BlockMatrix:
    """Tridiagonal sector block; ``diag`` and ``offdiag`` are relative to ``offset``."""

    diag: np.ndarray
    offdiag: np.ndarray
    basis: Tuple[BasisState, ...]
    offset: float
    sector: float
    handedness: str = "cw"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def dense(self) -> np.ndarray:
        h = np.diag(self.diag)
        if self.dim > 1:
            h += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return h

    def scaled(self, coupling_scale: float) -> "BlockMatrix":
        return BlockMatrix(
            self.diag, self.offdiag * coupling_scale, self.basis, self.offset, self.sector, self.handedness
        )


@dataclass(frozen=True)
class Eigenpair:
    energy: float
    shift: float  # eigenvalue relative to the block offset
    vector: np.ndarray


@dataclass(frozen=True)
class LabeledEigenpair:
    """Eigenpair tagged with the bare state ``|j, n0>`` it continues to at μ = 0."""

    j: Fraction
    n0: float
    energy: float
    shift: float
    coefficients: np.ndarray
    basis: Tuple[BasisState, ...]
    offset: float

    def coefficient(self, n: HalfInteger) -> float:
        n = half_integer(n)
        for (m, _), c in zip(self.basis, self.coefficients):
            if m == n:
                return float(c)
        return 0.0


def _kinetic(particle: Particle, kz: float) -> float:
    kx, ky, _ = particle.k
    return const.HBAR**2 * (kx * kx + ky * ky + kz * kz) / (2.0 * particle.mass)


def _photon_range(field: PhotonField) -> Tuple[float, float]:
    n0, h_tilde = field.require_fock()
    return n0, h_tilde


def spin_j_basis(
    field: PhotonField, particle: Particle, j_sector: HalfInteger
) -> Tuple[BasisState, ...]:
    """States ``|n, N>`` of the sector containing the bare state ``|j_sector, N0>``.

    cw sectors list n ascending and ccw sectors descending, so that a ccw
    block is entry-for-entry the cw block of the mirrored label.
    """
    big_j = particle.j_total
    j = half_integer(j_sector)
    if abs(j) > big_j or (big_j - j).denominator != 1:
        raise DomainError(f"j = {j} is not one of -J..J for J = {big_j}")
    n0, _ = _photon_range(field)
    sign = 1 if field.handedness == "cw" else -1
    basis = []
    for step in range(int(2 * big_j) + 1):
        n = sign * (step - big_j)
        photons = n0 + sign * (j - n)
        if photons >= 0:
            basis.append((n, photons))
    if not basis:
        raise DomainError("sector has no states with non-negative photon number")
    return tuple(basis)


def build_spin_j_block(
    field: PhotonField,
    particle: Particle,
    j_sector: HalfInteger,
    nonrelativistic: bool = False,
) -> BlockMatrix:
    """Sector block from the homogeneous linear system for the coefficients C^(n).

    Diagonal: (j - n) ħ ω_{j-n} (cw); off-diagonal between n and n+1:
    -(μ H̃0 / sqrt(2) J) sqrt(N_n (J + n + 1)(J - n)) with N_n the larger
    photon number of the pair.
    """
    n0, h_tilde = _photon_range(field)
    big_j = particle.j_total
    j = half_integer(j_sector)
    basis = spin_j_basis(field, particle, j)
    sign = 1 if field.handedness == "cw" else -1
    hw_l = []
    for n, _ in basis:
        l = int(sign * (j - n))
        hw_l.append(l * const.HBAR * omega_shifted(field, particle, l, nonrelativistic))
    diag = np.array(hw_l, dtype=np.float64)
    scale = particle.mu * h_tilde / (math.sqrt(2.0) * float(big_j))
    off = np.empty(len(basis) - 1)
    for i in range(len(basis) - 1):
        n_a, photons_a = basis[i]
        n_b, photons_b = basis[i + 1]
        n = min(n_a, n_b)
        photons = max(photons_a, photons_b)
        off[i] = -scale * math.sqrt(photons * float((big_j + n + 1) * (big_j - n)))
    offset = particle.kinetic_energy + n0 * (const.HBAR * field.omega0)
    sector = float(n0 + j) if sign > 0 else float(n0 - j)
    return BlockMatrix(diag, off, basis, offset, sector, field.handedness)


# --- independent operator construction ------------------------------------


def spin_operators(big_j: Fraction) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(J+, J-, Jz) in the basis n = -J..J, with J± = (Jx ± iJy) / 2J."""
    ms = [-big_j + i for i in range(int(2 * big_j) + 1)]
    dim = len(ms)
    jp = np.zeros((dim, dim))
    for col, m in enumerate(ms[:-1]):
        jp[col + 1, col] = math.sqrt(float((big_j - m) * (big_j + m + 1))) / float(2 * big_j)
    jz = np.diag([float(m) for m in ms])
    return jp, jp.T.copy(), jz


def annihilation(n_lo: int, n_hi: int) -> np.ndarray:
    """Photon annihilation operator on the Fock window N = n_lo..n_hi."""
    size = n_hi - n_lo + 1
    a = np.zeros((size, size))
    for col in range(1, size):
        a[col - 1, col] = math.sqrt(n_lo + col)
    return a


def operator_hamiltonian(
    field: PhotonField,
    particle: Particle,
    basis: Sequence[BasisState],
    nonrelativistic: bool = False,
) -> Tuple[np.ndarray, float]:
    """Matrix of the particle-photon Hamiltonian on an arbitrary list of states.

    Built from explicit spin and Fock operator matrices (Kronecker products
    over a photon-number window), independent of the sector formulas. Returns
    ``(matrix, offset)`` with the same offset convention as the blocks.
    """
    n0, h_tilde = _photon_range(field)
    if n0 != int(n0):
        raise DomainError("operator construction needs an integer photon number")
    big_j = particle.j_total
    photons = [int(N) for _, N in basis]
    n_lo, n_hi = min(photons), max(photons)
    size = n_hi - n_lo + 1
    jp, jm, _ = spin_operators(big_j)
    a = annihilation(n_lo, n_hi)
    ad = a.T
    if field.handedness == "cw":
        coupling = np.kron(jp, a) + np.kron(jm, ad)
    else:
        coupling = np.kron(jm, a) + np.kron(jp, ad)
    coupling *= -math.sqrt(2.0) * particle.mu * h_tilde

    hw = const.HBAR * field.omega0
    k0 = field.k0
    kinetic_ref = particle.kinetic_energy
    idx = []
    bare = []
    for n, N in basis:
        s_index = int(n + big_j)
        idx.append(s_index * size + (int(N) - n_lo))
        kin = 0.0
        if not nonrelativistic:
            # particle momentum along z shifts by k0 per absorbed photon
            kin = _kinetic(particle, particle.kz + (n0 - N) * k0) - kinetic_ref
        bare.append((N - n0) * hw + kin)
    h = coupling[np.ix_(idx, idx)] + np.diag(bare)
    return h, kinetic_ref + n0 * hw


# --- solving and labeling ---------------------------------------------------


def solve_block(block: BlockMatrix, backend: Optional[str] = None) -> List[Eigenpair]:
    """All eigenpairs, ascending in energy, with orthonormal eigenvectors."""
    w, v = kernels.tridiag_eigh(block.diag, block.offdiag, backend=backend)
    return [Eigenpair(block.offset + float(w[i]), float(w[i]), v[:, i].copy()) for i in range(block.dim)]


def charpoly_eigvals(block: BlockMatrix) -> np.ndarray:
    """Eigenvalues (relative to the offset) as roots of the characteristic polynomial.

    The polynomial comes from the three-term recurrence of the tridiagonal
    determinant, after centring and scaling the matrix to unit size.
    """
    d = np.asarray(block.diag, dtype=np.float64)
    e = np.asarray(block.offdiag, dtype=np.float64)
    centre = float(np.mean(d))
    scale = float(max(np.max(np.abs(d - centre)), np.max(np.abs(e)) if e.size else 0.0, 1e-300))
    d = (d - centre) / scale
    e = e / scale
    P = np.polynomial.Polynomial
    x = P([0.0, 1.0])
    p_prev, p = P([1.0]), P([d[0], -1.0])
    for i in range(1, d.size):
        p_prev, p = p, (P([d[i]]) - x) * p - e[i - 1] ** 2 * p_prev
    roots = np.sort(np.real(p.roots()))
    return roots * scale + centre


def _labels_from_track(block: BlockMatrix, track: np.ndarray, zero_vectors: np.ndarray):
    return [int(np.argmax(np.abs(zero_vectors[:, col]))) for col in track]


def label_states(
    block: BlockMatrix,
    backend: Optional[str] = None,
    ramp_start: int = RAMP_START,
    ramp_max: int = RAMP_MAX,
) -> List[LabeledEigenpair]:
    """Assign each eigenpair the bare state it turns into as the coupling is switched off.

    The off-diagonal coupling is ramped linearly to zero in S steps and
    eigenvectors are matched by largest overlap; S doubles until two
    successive schedules give the same assignment.
    """
    pairs = solve_block(block, backend)
    if block.dim == 1 or not np.any(block.offdiag):
        # uncoupled: eigenvectors are the basis states themselves
        positions = [int(np.argmax(np.abs(p.vector))) for p in pairs]
        return _attach(block, pairs, positions)

    _, zero_v = kernels.tridiag_eigh(block.diag, np.zeros_like(block.offdiag), backend=backend)
    previous = None
    steps = ramp_start
    last_pair = None
    while steps <= ramp_max:
        track, min_overlap, bad_a, bad_b = kernels.ramp_track(block.diag, block.offdiag, steps, backend)
        if bad_a < 0 and min_overlap >= OVERLAP_THRESHOLD:
            positions = _labels_from_track(block, track, zero_v)
            if len(set(positions)) == len(positions):
                if positions == previous:
                    return _attach(block, pairs, positions)
                previous = positions
            else:
                previous = None
        else:
            previous = None
            last_pair = (bad_b, bad_a) if bad_a >= 0 else None
        steps *= 2
    raise LabelingError(
        f"eigenvector assignment not stable up to {ramp_max} ramp steps", pair=last_pair
    )


def _attach(block: BlockMatrix, pairs: List[Eigenpair], positions: List[int]):
    out = []
    for pair, pos in zip(pairs, positions):
        n, photons = block.basis[pos]
        out.append(
            LabeledEigenpair(
                j=n,
                n0=photons,
                energy=pair.energy,
                shift=pair.shift,
                coefficients=pair.vector,
                basis=block.basis,
                offset=block.offset,
            )
        )
    return out


def labeled_level(
    field: PhotonField,
    particle: Particle,
    j: HalfInteger,
    nonrelativistic: bool = False,
    backend: Optional[str] = None,
) -> LabeledEigenpair:
    """The dressed level ``(j, N0)``: the eigenpair of its sector labelled ``j``."""
    j = half_integer(j)
    block = build_spin_j_block(field, particle, j, nonrelativistic)
    for pair in label_states(block, backend):
        if pair.j == j:
            return pair
    raise LabelingError(f"no eigenpair of the sector continued to j = {j}")


def sector_matrix(
    field: PhotonField, particle: Particle, sectors: Sequence[HalfInteger], nonrelativistic: bool = False
) -> Tuple[np.ndarray, Tuple[BasisState, ...], List[int]]:
    """Operator-built Hamiltonian over the union of several sectors.

    Returns the matrix, the combined basis, and the sector boundaries. Used to
    show that different sectors never couple.
    """
    basis = []
    bounds = [0]
    for j in sectors:
        basis.extend(spin_j_basis(field, particle, j))
        bounds.append(len(basis))
    h, _ = operator_hamiltonian(field, particle, basis, nonrelativistic)
    return h, tuple(basis), bounds


# --- charged spin-1/2 particle ---------------------------------------------


def _charged_constants(field: PhotonField, particle: Particle):
    _, h_tilde = _photon_range(field)
    e = particle.charge
    m = particle.mass
    w0 = field.omega0
    ponderomotive = e * e * h_tilde**2 / (m * w0 * w0)
    spin_term = e * h_tilde**2 * (2.0 * particle.mu_anomalous + particle.mu_bohr) / (m * const.C * w0)
    rotation = (h_tilde / m) * (e / w0 + particle.mu_anomalous / const.C + particle.mu_bohr / (2.0 * const.C))
    return ponderomotive, spin_term, rotation


def _charged_diag(field, particle, spin, photons, nonrelativistic, consts, momentum_ref):
    ponderomotive, spin_term, _ = consts
    n0 = field.n0
    hw = const.HBAR * field.omega0
    s = 2.0 * float(spin)
    value = (photons - n0) * (hw + ponderomotive) + photons * spin_term * s
    if not nonrelativistic:
        kz = particle.kz + (momentum_ref - photons) * field.k0
        value += _kinetic(particle, kz) - particle.kinetic_energy
    return value


def _charged_offset(field: PhotonField, particle: Particle, consts) -> float:
    return particle.kinetic_energy + field.n0 * (const.HBAR * field.omega0 + consts[0])


def charged_sector_block(
    field: PhotonField,
    particle: Particle,
    j_sector: HalfInteger,
    nonrelativistic: bool = True,
    momentum_ref: Optional[float] = None,
) -> BlockMatrix:
    """2x2 block of the rotation-free part H' containing the bare state ``|j, N0>``.

    H' adds a spin-dependent photon energy N [(e H̃0² / m c ω0²)(e c + (2μa + μB) ω0 σz)]
    to the neutral Hamiltonian. All sectors share one offset so levels from
    different blocks can be subtracted directly. ``momentum_ref`` is the
    photon number at which the particle has wave vector ``particle.k``
    (default N0).
    """
    if particle.j_total != HALF:
        raise DomainError("charged treatment is for spin-1/2 particles")
    if not particle.is_charged:
        raise DomainError("charged block needs a nonzero charge")
    if field.handedness != "cw":
        mirrored = charged_sector_block(
            field.flipped(), particle, -half_integer(j_sector), nonrelativistic, momentum_ref
        )
        basis = tuple((-n, N) for n, N in mirrored.basis)
        return BlockMatrix(
            mirrored.diag, mirrored.offdiag, basis, mirrored.offset,
            mirrored.sector, "ccw",
        )
    n0, h_tilde = _photon_range(field)
    consts = _charged_constants(field, particle)
    ref = n0 if momentum_ref is None else momentum_ref
    basis = spin_j_basis(field, particle, j_sector)
    diag = np.array([_charged_diag(field, particle, n, N, nonrelativistic, consts, ref) for n, N in basis])
    off = np.empty(len(basis) - 1)
    if off.size:
        photons = max(basis[0][1], basis[1][1])
        off[0] = -math.sqrt(2.0) * particle.mu * h_tilde * math.sqrt(photons)
    return BlockMatrix(diag, off, basis, _charged_offset(field, particle, consts), float(n0 + half_integer(j_sector)))


def charged_level(
    field: PhotonField, particle: Particle, j: HalfInteger, nonrelativistic: bool = True,
    backend: Optional[str] = None,
) -> LabeledEigenpair:
    j = half_integer(j)
    for pair in label_states(charged_sector_block(field, particle, j, nonrelativistic), backend):
        if pair.j == j:
            return pair
    raise LabelingError(f"no charged eigenpair continued to j = {j}")


def charged_splitting_numeric(
    field: PhotonField, particle: Particle, nonrelativistic: bool = True, backend: Optional[str] = None
) -> float:
    """ε(-1/2, N0) - ε(+1/2, N0) from the exact 2x2 H' blocks (erg)."""
    upper = charged_level(field, particle, -HALF, nonrelativistic, backend)
    lower = charged_level(field, particle, HALF, nonrelativistic, backend)
    return (upper.offset - lower.offset) + (upper.shift - lower.shift)


@dataclass(frozen=True)
class ChargedWindow:
    """Dense H' + H'' over the photon numbers N0-W..N0+W (both spins)."""

    matrix: np.ndarray
    basis: Tuple[BasisState, ...]
    offset: float
    h_double_prime: np.ndarray


def build_charged_block(
    field: PhotonField, particle: Particle, window: int, nonrelativistic: bool = True
) -> ChargedWindow:
    """Windowed matrix of H' + H'' at the particle's transverse momentum.

    H'' changes the photon number by one without flipping the spin, with
    amplitude -(H̃0/m)(e/ω0 + μa/c + μB/2c) ħ k⊥/√2 times the photon
    factor; the transverse phase (kx + i ky)/k⊥ is gauged away. At
    k⊥ = 0 the H'' part vanishes identically.
    """
    if field.handedness != "cw":
        raise DomainError("windowed charged matrix is built for cw polarization")
    if particle.j_total != HALF or not particle.is_charged:
        raise DomainError("windowed charged matrix needs a charged spin-1/2 particle")
    n0, h_tilde = _photon_range(field)
    if window < 1:
        raise DomainError("window half-width must be at least 1")
    if n0 - window < 0:
        raise DomainError("window reaches negative photon numbers")
    consts = _charged_constants(field, particle)
    photons = [n0 + q for q in range(-window, window + 1)]
    basis = tuple((s, N) for N in photons for s in (-HALF, HALF))
    dim = len(basis)
    index = {state: i for i, state in enumerate(basis)}
    h1 = np.zeros((dim, dim))
    h2 = np.zeros((dim, dim))
    flip = -math.sqrt(2.0) * particle.mu * h_tilde
    rot = -consts[2] * const.HBAR * particle.k_perp / math.sqrt(2.0)
    for i, (s, N) in enumerate(basis):
        h1[i, i] = _charged_diag(field, particle, s, N, nonrelativistic, consts, n0)
        if s == -HALF:
            partner = index.get((HALF, N - 1))
            if partner is not None:
                h1[i, partner] = h1[partner, i] = flip * math.sqrt(N)
        below = index.get((s, N - 1))
        if below is not None:
            h2[i, below] = h2[below, i] = rot * math.sqrt(N)
    return ChargedWindow(h1 + h2, basis, _charged_offset(field, particle, consts), h2)


def perturbation_h2(
    field: PhotonField,
    particle: Particle,
    state: LabeledEigenpair,
    nonrelativistic: bool = True,
    backend: Optional[str] = None,
) -> float:
    """Second-order energy shift of an H' eigenstate from the rotation term H''.

    Sums |<m|H''|state>|² / (ε_state - ε_m) over the four H' eigenstates of
    the two neighbouring sectors (one photon more or fewer).
    """
    if particle.k_perp == 0.0:
        return 0.0
    consts = _charged_constants(field, particle)
    rot = -consts[2] * const.HBAR * particle.k_perp / math.sqrt(2.0)
    # the sector is fixed by the state's photon content
    j_sector = state.j
    n_state = state.n0
    total = 0.0
    gaps = []
    for shift in (-1, 1):
        if n_state + shift < 0:
            continue
        neighbour = field.replace(n0=n_state + shift, h0=None)
        block = charged_sector_block(neighbour, particle, j_sector, nonrelativistic, momentum_ref=field.n0)
        if any(N < 0 for _, N in block.basis):
            continue
        # neighbour blocks use their own offset; bring them to the state's
        offset_delta = block.offset - state.offset
        for pair in solve_block(block, backend):
            amp = 0.0
            for (s, N), c in zip(state.basis, state.coefficients):
                for (s2, N2), c2 in zip(block.basis, pair.vector):
                    if s2 == s and N2 == N + shift:
                        amp += c * c2 * math.sqrt(max(N, N2))
            element = rot * amp
            gap = state.shift - (pair.shift + offset_delta)
            if gap == 0.0:
                raise DegeneratePerturbationError("vanishing energy denominator")
            gaps.append(abs(gap))
            total += element * element / gap
    if gaps and abs(total) > 0.1 * min(gaps):
        warnings.warn("second-order correction exceeds 10% of the level spacing", ValidityWarning, stacklevel=2)
    return total


def windowed_level(
    field: PhotonField,
    particle: Particle,
    state: LabeledEigenpair,
    window: int = 5,
    nonrelativistic: bool = True,
) -> float:
    """Exact eigenvalue of the windowed H' + H'' continued from ``state`` (erg).

    States at the window edge lack their spin-flip partner; a half-width of
    about five photons pushes that truncation error well below the
    second-order shift for weak H''.
    """
    win = build_charged_block(field, particle, window, nonrelativistic)
    w, v = np.linalg.eigh(win.matrix)
    ref = np.zeros(len(win.basis))
    index = {b: i for i, b in enumerate(win.basis)}
    for b, c in zip(state.basis, state.coefficients):
        ref[index[b]] = c
    best = int(np.argmax(np.abs(ref @ v)))
    return win.offset + float(w[best])


# --- magnetodipole contraction ---------------------------------------------

_SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])  # basis order (+1/2, -1/2)
_SIGMA_Z = np.diag([1.0, -1.0])
CHANNEL_OPERATORS = {
    # e±·σ = (σx ± iσy)/√2 = √2 σ±
    "e+": math.sqrt(2.0) * _SIGMA_PLUS,
    "e-": math.sqrt(2.0) * _SIGMA_PLUS.T,
    "ez": _SIGMA_Z,
}


def dipole_contraction(bra: dict, ket: dict, channel: str, mu: float) -> float:
    """|<bra| μ e·σ |ket>| for states given as ``{(S_z, N): amplitude}``.

    The spin operator acts as an explicit 2x2 matrix; photon numbers must
    match exactly for a component to contribute.
    """
    op = CHANNEL_OPERATORS[channel]
    photons = sorted({N for _, N in bra} | {N for _, N in ket})
    index = {N: i for i, N in enumerate(photons)}

    def as_array(state):
        arr = np.zeros((2, len(photons)))
        for (s, N), amp in state.items():
            arr[0 if s > 0 else 1, index[N]] += amp
        return arr

    return abs(mu) * abs(float(np.sum(as_array(bra) * (op @ as_array(ket)))))
