"""Dense complex-matrix primitives.

Everything here works on small (dimension <= 16) complex matrices. The
Hermitian eigensolver is a cyclic two-sided Jacobi scheme with two
interchangeable kernels: a jitted scalar-loop kernel and a vectorized numpy
kernel. :mod:`qcorr._accel` picks one at import time.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import _accel
from .errors import QCorrError

MAX_SWEEPS = 100
OFF_TOL = 1e-13


@_accel.njit
def _jacobi_loops(a, max_sweeps, off_tol):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    thresh = off_tol * max(1.0, math.sqrt(scale))
    sweeps = 0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if math.sqrt(2.0 * off) < thresh:
            break
        sweeps += 1
        for p in range(n):
            for q in range(p + 1, n):
                g = a[p, q]
                ag = abs(g)
                if ag < 1e-300:
                    continue
                phase = (g / ag).conjugate()
                theta = 0.5 * math.atan2(2.0 * ag, a[q, q].real - a[p, p].real)
                c = math.cos(theta)
                s = math.sin(theta)
                # G = diag(1, conj(phase of a_pq)) @ [[c, s], [-s, c]]
                g00 = complex(c, 0.0)
                g01 = complex(s, 0.0)
                g10 = -s * phase
                g11 = c * phase
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * g00 + akq * g10
                    a[k, q] = akp * g01 + akq * g11
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = g00.conjugate() * apk + g10.conjugate() * aqk
                    a[q, k] = g01.conjugate() * apk + g11.conjugate() * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * g00 + vkq * g10
                    v[k, q] = vkp * g01 + vkq * g11
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, sweeps


def _jacobi_numpy(a, max_sweeps, off_tol):
    n = a.shape[0]
    a = np.array(a, dtype=np.complex128)
    v = np.eye(n, dtype=np.complex128)
    thresh = off_tol * max(1.0, np.linalg.norm(a))
    iu = np.triu_indices(n, 1)
    sweeps = 0
    for _ in range(max_sweeps):
        if math.sqrt(2.0) * np.linalg.norm(a[iu]) < thresh:
            break
        sweeps += 1
        for p in range(n):
            for q in range(p + 1, n):
                g = a[p, q]
                ag = abs(g)
                if ag < 1e-300:
                    continue
                phase = np.conj(g / ag)
                theta = 0.5 * math.atan2(2.0 * ag, a[q, q].real - a[p, p].real)
                c, s = math.cos(theta), math.sin(theta)
                rot = np.array([[c, s], [-s * phase, c * phase]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ rot
    return np.diag(a).real.copy(), v, sweeps


def jacobi_kernel(name: str | None = None):
    """Return the Jacobi kernel by name (``"numba"`` or ``"numpy"``)."""
    name = name or _accel.backend()
    if name == "numba":
        return _jacobi_loops
    if name == "numpy":
        return _jacobi_numpy
    raise ValueError(f"unknown kernel {name!r}")


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise QCorrError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise QCorrError("matrix has non-finite entries")
    return m


def hermitian_eig(m, tol: float = 1e-10, kernel: str | None = None):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : array_like
        Square complex matrix with ``max|m - m^H| <= tol``.
    tol : float
        Hermiticity tolerance.
    kernel : {"numba", "numpy"}, optional
        Force a Jacobi kernel; defaults to the import-time backend.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in descending order.
    eigenvectors : ndarray
        Orthonormal eigenvectors as columns. The largest-magnitude component
        of every column is real and positive.
    """
    m = _as_square(m)
    if m.size and np.max(np.abs(m - m.conj().T)) > tol:
        raise QCorrError("matrix is not Hermitian within tolerance")
    w, v = eigh_unchecked(0.5 * (m + m.conj().T), kernel)
    return w, fix_phases(v)


def eigh_unchecked(h: np.ndarray, kernel: str | None = None):
    """Descending eigenpairs of an already-Hermitian complex128 array, no checks."""
    w, v, _ = jacobi_kernel(kernel)(h, MAX_SWEEPS, OFF_TOL)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def fix_phases(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    v = np.array(v, dtype=np.complex128)
    if v.size == 0:
        return v
    k = np.argmax(np.abs(v), axis=0)
    piv = v[k, np.arange(v.shape[1])]
    mag = np.abs(piv)
    mag[mag == 0] = 1.0
    return v * (np.conj(piv) / mag)[None, :]


def matrix_sqrt_psd(m, tol: float = 1e-12) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-tol, tol]`` are treated as exact zeros, so rank-deficient
    inputs do not pick up ``sqrt(eps)`` noise. An eigenvalue below ``-tol``
    means the input is not PSD and raises.
    """
    m = _as_square(m)
    if m.size and np.max(np.abs(m - m.conj().T)) > max(tol, 1e-10):
        raise QCorrError("matrix is not Hermitian within tolerance")
    w, v = eigh_unchecked(0.5 * (m + m.conj().T))
    if w.size and w[-1] < -tol:
        raise QCorrError(f"matrix is not positive semidefinite (eigenvalue {w[-1]:.3e})")
    w = np.where(w <= tol, 0.0, w)
    return (v * np.sqrt(w)) @ v.conj().T


def tensor_product(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Reduce ``m`` onto the subsystems listed in ``keep``.

    Kept subsystems appear in ascending index order in the result.
    """
    m = _as_square(m)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != m.shape[0]:
        raise QCorrError(f"dims {dims} do not match matrix dimension {m.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise QCorrError(f"invalid subsystem selection {keep} for {len(dims)} subsystems")
    t = m.reshape(dims + dims)
    nsub = len(dims)
    for i in reversed(range(len(dims))):
        if i in keep:
            continue
        t = np.trace(t, axis1=i, axis2=i + nsub)
        nsub -= 1
    d = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d, d)


def von_neumann_entropy(m, tol: float = 1e-12) -> float:
    """Base-2 entropy ``-Tr m log2 m``; eigenvalues ``<= tol`` contribute 0."""
    w, _ = hermitian_eig(m, tol=1e-9)
    return entropy_of_spectrum(w, tol)


def entropy_of_spectrum(w, tol: float = 1e-12) -> float:
    w = np.asarray(w, dtype=float)
    w = w[w > tol]
    return float(-np.sum(w * np.log2(w)))
