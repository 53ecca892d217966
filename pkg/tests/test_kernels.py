import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from photondress import kernels

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)


def dense(d, e):
    h = np.diag(d)
    if e.size:
        h += np.diag(e, 1) + np.diag(e, -1)
    return h


@st.composite
def tridiagonal(draw, max_n=12):
    n = draw(st.integers(min_value=1, max_value=max_n))
    d = draw(arrays(np.float64, n, elements=finite))
    e = draw(arrays(np.float64, n - 1, elements=finite))
    return d, e


@pytest.mark.parametrize("backend", ["numpy", "numba"])
@settings(max_examples=60, deadline=None)
@given(m=tridiagonal())
def test_eigh_residual_and_orthonormality(backend, m):
    d, e = m
    w, v = kernels.tridiag_eigh(d, e, backend=backend)
    h = dense(d, e)
    scale = max(1.0, np.max(np.abs(h)))
    assert np.all(np.diff(w) >= 0)
    assert np.max(np.abs(h @ v - v * w)) <= 1e-12 * scale
    assert np.max(np.abs(v.T @ v - np.eye(d.size))) <= 1e-12


@pytest.mark.parametrize("backend", ["numpy", "numba"])
@settings(max_examples=40, deadline=None)
@given(m=tridiagonal())
def test_bisection_matches_lapack(backend, m):
    d, e = m
    ref = np.linalg.eigvalsh(dense(d, e))
    got = kernels.bisect_eigvals(d, e, backend=backend)
    scale = max(1.0, np.max(np.abs(ref)))
    assert np.max(np.abs(got - ref)) <= 1e-12 * scale


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_sturm_count_counts_eigenvalues_below(backend):
    rng = np.random.default_rng(1)
    d, e = rng.normal(size=7), rng.normal(size=6)
    w = np.linalg.eigvalsh(dense(d, e))
    for x in np.linspace(w[0] - 1, w[-1] + 1, 23):
        assert kernels.sturm_count(d, e, x, backend=backend) == int(np.sum(w < x))


def test_sturm_count_vectorized():
    d, e = np.array([0.0, 1.0, 2.0]), np.array([0.3, 0.3])
    xs = np.array([-5.0, 0.5, 1.5, 5.0])
    assert list(kernels.sturm_count(d, e, xs)) == [0, 1, 2, 3]


def test_backends_agree_on_eigenvectors_up_to_sign():
    rng = np.random.default_rng(7)
    d, e = rng.normal(size=9), rng.normal(size=8)
    w1, v1 = kernels.tridiag_eigh(d, e, backend="numba")
    w2, v2 = kernels.tridiag_eigh(d, e, backend="numpy")
    assert np.allclose(w1, w2, atol=1e-14)
    signs = np.sign(np.sum(v1 * v2, axis=0))
    assert np.allclose(v1, v2 * signs, atol=1e-13)


def test_ramp_identity_when_already_uncoupled():
    d = np.array([0.0, 1.0, 2.0])
    e = np.zeros(2)
    for backend in ("numba", "numpy"):
        track, overlap, a, b = kernels.ramp_track(d, e, 8, backend=backend)
        assert list(track) == [0, 1, 2]
        assert overlap == pytest.approx(1.0)
        assert a == b == -1


def test_ramp_follows_avoided_crossing():
    # two levels that cross at zero coupling: the lower dressed state ends on the upper bare one
    d = np.array([1.0, 0.0])
    e = np.array([0.1])
    for backend in ("numba", "numpy"):
        track, overlap, _, _ = kernels.ramp_track(d, e, 32, backend=backend)
        assert overlap > 0.99
        # bare eigenvectors sorted by energy: index 0 is basis state 1
        assert list(track) == [0, 1]


def test_ramp_backends_agree():
    rng = np.random.default_rng(3)
    d, e = np.sort(rng.normal(size=6)), 0.2 * rng.normal(size=5)
    t1 = kernels.ramp_track(d, e, 64, backend="numba")
    t2 = kernels.ramp_track(d, e, 64, backend="numpy")
    assert list(t1[0]) == list(t2[0])
    assert t1[1] == pytest.approx(t2[1], abs=1e-12)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.tridiag_eigh(np.zeros(2), np.zeros(1), backend="fortran")


def test_env_flag_selects_numpy():
    out = subprocess.run(
        [sys.executable, "-c", "from photondress import kernels; print(kernels.default_backend())"],
        env={**os.environ, "PHOTONDRESS_DISABLE_NUMBA": "1"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
