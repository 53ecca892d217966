"""Numeric kernels for real symmetric tridiagonal matrices.

Each kernel exists twice: a loop version compiled with ``numba.njit`` and a
vectorized/LAPACK pure-numpy version. The public names (``tridiag_eigh``,
``sturm_count``, ``bisect_eigvals``, ``ramp_track``) are bound to the numba
versions unless numba is missing or ``PHOTONDRESS_DISABLE_NUMBA`` is set to
a true value in the environment at import time.

Conventions: ``diag`` has length n, ``off`` has length n-1 with ``off[i]``
coupling rows i and i+1. Eigenvalues come back ascending.
"""

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("PHOTONDRESS_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")

_EPS = np.finfo(np.float64).eps
MAX_QL_ITERATIONS = 60


def _identity_decorator(*args, **kwargs):
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


njit = numba.njit if numba is not None else _identity_decorator


# --- implicit-shift QL ------------------------------------------------------


@njit(cache=True)
def _tql_numba(diag, off):
    n = diag.shape[0]
    d = diag.copy()
    e = np.zeros(n)
    for i in range(n - 1):
        e[i] = off[i]
    z = np.eye(n)
    norm = 0.0
    for i in range(n):
        norm = max(norm, abs(d[i]) + 2.0 * abs(e[i]))
    # scale by an exact power of two so that ||T|| ~ 1 (guards sub/overflow)
    power = 0
    if norm > 0.0:
        power = math.frexp(norm)[1]
        for i in range(n):
            d[i] = math.ldexp(d[i], -power)
            e[i] = math.ldexp(e[i], -power)
    # absolute deflation floor: couplings below eps² ||T|| are numerically zero even
    # when the neighbouring diagonal entries vanish
    floor = _EPS * _EPS
    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > MAX_QL_ITERATIONS:
                raise RuntimeError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            deflated = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    f = z[k, i + 1]
                    z[k, i + 1] = s * z[k, i] + c * f
                    z[k, i] = c * z[k, i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    for i in range(n):
        d[i] = math.ldexp(d[i], power)
    order = np.argsort(d, kind="mergesort")
    return d[order], z[:, order]


def _tql_numpy(diag, off):
    diag = np.asarray(diag, dtype=np.float64)
    off = np.asarray(off, dtype=np.float64)
    h = np.diag(diag)
    if off.size:
        h += np.diag(off, 1) + np.diag(off, -1)
    return np.linalg.eigh(h)


# --- Sturm sequence ---------------------------------------------------------


@njit(cache=True)
def _sturm_count_numba(diag, off, x):
    n = diag.shape[0]
    tiny = _EPS * (np.max(np.abs(diag)) + 2.0 * np.max(np.abs(off)) if n > 1 else abs(diag[0]))
    if tiny == 0.0:
        tiny = _EPS
    count = 0
    q = diag[0] - x
    if q == 0.0:
        q = -tiny
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = diag[i] - x - off[i - 1] * off[i - 1] / q
        if q == 0.0:
            q = -tiny
        if q < 0.0:
            count += 1
    return count


def _sturm_count_numpy(diag, off, x):
    """Vectorized over ``x``: number of eigenvalues strictly below each point."""
    diag = np.asarray(diag, dtype=np.float64)
    off = np.asarray(off, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    scale = np.max(np.abs(diag)) + (2.0 * np.max(np.abs(off)) if off.size else 0.0)
    tiny = _EPS * scale if scale > 0 else _EPS
    q = diag[0] - x
    q = np.where(q == 0.0, -tiny, q)
    count = (q < 0).astype(np.int64)
    off2 = off * off
    # an infinite pivot after a tiny one still carries the right sign
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for i in range(1, diag.size):
            q = diag[i] - x - off2[i - 1] / q
            q = np.where(q == 0.0, -tiny, q)
            count += q < 0
    return count


def _gershgorin(diag, off):
    radius = np.zeros_like(diag)
    if off.size:
        radius[:-1] += np.abs(off)
        radius[1:] += np.abs(off)
    lo = float(np.min(diag - radius))
    hi = float(np.max(diag + radius))
    pad = _EPS * max(abs(lo), abs(hi), 1e-300)
    return lo - pad, hi + pad


@njit(cache=True)
def _bisect_numba(diag, off, lo, hi, tol):
    n = diag.shape[0]
    out = np.empty(n)
    for k in range(n):
        a = lo
        b = hi
        while b - a > tol:
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            if _sturm_count_numba(diag, off, mid) > k:
                b = mid
            else:
                a = mid
        out[k] = 0.5 * (a + b)
    return out


def _bisect_numpy(diag, off, lo, hi, tol):
    n = diag.size
    a = np.full(n, lo)
    b = np.full(n, hi)
    k = np.arange(n)
    for _ in range(2200):
        active = (b - a) > tol
        if not active.any():
            break
        mid = 0.5 * (a + b)
        stuck = (mid == a) | (mid == b)
        if np.all(stuck | ~active):
            break
        above = _sturm_count_numpy(diag, off, mid) > k
        b = np.where(active & above, mid, b)
        a = np.where(active & ~above, mid, a)
    return 0.5 * (a + b)


# --- adiabatic ramp tracking ------------------------------------------------


@njit(cache=True)
def _ramp_numba(diag, off, steps):
    """Follow every eigenvector of (diag, off) along off -> 0.

    Returns ``(track, min_overlap, bad_a, bad_b)``: ``track[i]`` is the
    column index, at coupling zero, of the state that started as the i-th
    eigenvector at full coupling. ``bad_a/bad_b`` name the first pair whose
    assignment was ambiguous (-1 when none).
    """
    n = diag.shape[0]
    w, v_prev = _tql_numba(diag, off)
    track = np.arange(n)
    min_overlap = 1.0
    bad_a = -1
    bad_b = -1
    for s in range(1, steps + 1):
        lam = 1.0 - s / steps
        w, v = _tql_numba(diag, off * lam)
        new_track = np.empty(n, dtype=np.int64)
        taken = np.zeros(n, dtype=np.bool_)
        for i in range(n):
            best = -1.0
            best_j = 0
            col = track[i]
            for j in range(n):
                ov = 0.0
                for r in range(n):
                    ov += v_prev[r, col] * v[r, j]
                ov = abs(ov)
                if ov > best:
                    best = ov
                    best_j = j
            if best < min_overlap:
                min_overlap = best
            if taken[best_j] and bad_a < 0:
                bad_a = i
                for q in range(i):
                    if new_track[q] == best_j:
                        bad_b = q
            taken[best_j] = True
            new_track[i] = best_j
        track = new_track
        v_prev = v
    return track, min_overlap, bad_a, bad_b


def _ramp_numpy(diag, off, steps):
    diag = np.asarray(diag, dtype=np.float64)
    off = np.asarray(off, dtype=np.float64)
    n = diag.size
    _, v_prev = _tql_numpy(diag, off)
    track = np.arange(n)
    min_overlap = 1.0
    bad_a = bad_b = -1
    for s in range(1, steps + 1):
        lam = 1.0 - s / steps
        _, v = _tql_numpy(diag, off * lam)
        overlap = np.abs(v_prev[:, track].T @ v)
        new_track = np.argmax(overlap, axis=1)
        min_overlap = min(min_overlap, float(overlap[np.arange(n), new_track].min()))
        if bad_a < 0:
            _, first, counts = np.unique(new_track, return_index=True, return_counts=True)
            if np.any(counts > 1):
                dup = int(np.flatnonzero(counts > 1)[0])
                hits = np.flatnonzero(new_track == new_track[first[dup]])
                bad_b, bad_a = int(hits[0]), int(hits[1])
        track = new_track
        v_prev = v
    return track, min_overlap, bad_a, bad_b


# --- public dispatch --------------------------------------------------------


def tridiag_eigh(diag, off, backend=None):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    off = np.ascontiguousarray(off, dtype=np.float64)
    if _pick(backend) == "numba":
        return _tql_numba(diag, off)
    return _tql_numpy(diag, off)


def sturm_count(diag, off, x, backend=None):
    """Number of eigenvalues strictly less than ``x``."""
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    off = np.ascontiguousarray(off, dtype=np.float64)
    if _pick(backend) == "numba" and np.ndim(x) == 0:
        return int(_sturm_count_numba(diag, off, float(x)))
    return _sturm_count_numpy(diag, off, x)


def bisect_eigvals(diag, off, tol=None, backend=None):
    """All eigenvalues by Sturm-count bisection, ascending.

    ``tol`` defaults to a few ulps of the Gershgorin bound.
    """
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    off = np.ascontiguousarray(off, dtype=np.float64)
    lo, hi = _gershgorin(diag, off)
    if tol is None:
        tol = 4.0 * _EPS * max(abs(lo), abs(hi))
    if _pick(backend) == "numba":
        return _bisect_numba(diag, off, lo, hi, tol)
    return _bisect_numpy(diag, off, lo, hi, tol)


def ramp_track(diag, off, steps, backend=None):
    diag = np.ascontiguousarray(diag, dtype=np.float64)
    off = np.ascontiguousarray(off, dtype=np.float64)
    if _pick(backend) == "numba":
        track, min_overlap, a, b = _ramp_numba(diag, off, int(steps))
        return np.asarray(track), float(min_overlap), int(a), int(b)
    return _ramp_numpy(diag, off, int(steps))


def _pick(backend):
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and numba is None:
        raise RuntimeError("numba backend requested but numba is not importable")
    return backend


def default_backend():
    return _pick(None)


def warmup():
    """Compile the numba kernels (no-op on the numpy path)."""
    if not USE_NUMBA:
        return
    d = np.array([0.0, 1.0, 2.0])
    o = np.array([0.5, 0.5])
    tridiag_eigh(d, o)
    bisect_eigvals(d, o)
    ramp_track(d, o, 4)
