"""Entanglement functionals for eigenvectors and two-qubit mixed states."""
from __future__ import annotations

import itertools

import numpy as np

from .errors import QCorrError, UnsupportedDimsError
from .linalg import entropy_of_spectrum, hermitian_eig, matrix_sqrt_psd, partial_trace

CONCURRENCE = "concurrence"
ENTROPY = "entropy_of_entanglement"
MULTIPARTITE = "multipartite_bipartition_mean"
KINDS = (CONCURRENCE, ENTROPY, MULTIPARTITE)
MU_CUT = 1e-14

SIGMA_Y2 = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def _amplitudes(phi):
    return np.asarray(getattr(phi, "amplitudes", phi), dtype=np.complex128).reshape(-1)


def _matrix(rho):
    return np.asarray(getattr(rho, "matrix", rho), dtype=np.complex128)


def _dims_of(state, dims, default=None):
    if dims is None:
        dims = getattr(state, "dims", default)
    if dims is None:
        raise QCorrError("subsystem dims are required")
    return tuple(int(d) for d in dims)


def concurrence_pure(phi, dims=None) -> float:
    """``2 |a00 a11 - a01 a10|`` for a two-qubit pure state."""
    dims = _dims_of(phi, dims, (2, 2))
    if dims != (2, 2):
        raise UnsupportedDimsError(f"pure-state concurrence needs dims (2, 2), got {dims}")
    a = _amplitudes(phi)
    return float(2.0 * abs(a[0] * a[3] - a[1] * a[2]))


def concurrence_mixed(rho, dims=None) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    The spectrum of ``rho @ rho_tilde`` is read off the Hermitian matrix
    ``sqrt(rho) rho_tilde sqrt(rho)``, which shares its eigenvalues.
    """
    dims = _dims_of(rho, dims, (2, 2))
    if dims != (2, 2):
        raise UnsupportedDimsError(f"mixed-state concurrence needs dims (2, 2), got {dims}")
    m = _matrix(rho)
    tilde = SIGMA_Y2 @ m.conj() @ SIGMA_Y2
    s = matrix_sqrt_psd(m)
    mu, _ = hermitian_eig(s @ tilde @ s, tol=1e-9)
    # round-off of order eps would otherwise surface as sqrt(eps) in r
    r = np.sqrt(np.where(mu <= MU_CUT, 0.0, mu))
    return float(max(0.0, r[0] - r[1] - r[2] - r[3]))


def _bipartition_purity(a: np.ndarray, dims, left) -> float:
    red = partial_trace(np.outer(a, a.conj()), dims, left)
    return float(np.real(np.trace(red @ red)))


def entanglement_entropy_pure(phi, bipartition=(0,), dims=None) -> float:
    """Base-2 von Neumann entropy of the reduced state on ``bipartition``."""
    dims = _dims_of(phi, dims)
    a = _amplitudes(phi)
    red = partial_trace(np.outer(a, a.conj()), dims, bipartition)
    w, _ = hermitian_eig(red, tol=1e-9)
    return entropy_of_spectrum(w)


def bipartitions(n: int):
    """Every unordered split ``K | not K`` of ``n`` subsystems (``2**(n-1) - 1`` of them)."""
    if n < 2:
        raise UnsupportedDimsError("need at least two subsystems")
    rest = range(1, n)
    for r in range(0, n - 1):
        for extra in itertools.combinations(rest, r):
            yield (0,) + extra


def multipartite_pure_entanglement(phi, dims=None) -> float:
    """Mean bipartite concurrence ``sqrt(2 (1 - Tr rho_K^2))`` over all bipartitions."""
    dims = _dims_of(phi, dims)
    a = _amplitudes(phi)
    vals = [np.sqrt(max(0.0, 2.0 * (1.0 - _bipartition_purity(a, dims, k))))
            for k in bipartitions(len(dims))]
    return float(np.mean(vals))


def pure_entanglement(phi, dims=None, kind: str = CONCURRENCE) -> float:
    """Dispatch a pure-state entanglement functional by name.

    ``concurrence`` uses the two-qubit formula on ``(2, 2)`` and the
    bipartition-mean generalization everywhere else.
    """
    dims = _dims_of(phi, dims)
    if kind == CONCURRENCE:
        if dims == (2, 2):
            return concurrence_pure(phi, dims)
        return multipartite_pure_entanglement(phi, dims)
    if kind == MULTIPARTITE:
        return multipartite_pure_entanglement(phi, dims)
    if kind == ENTROPY:
        if len(dims) != 2:
            raise UnsupportedDimsError("entropy of entanglement is defined for bipartite states only")
        return entanglement_entropy_pure(phi, (0,), dims)
    raise QCorrError(f"unknown entanglement kind {kind!r}")


def block_average_entanglement(vectors, u, dims, kind: str = CONCURRENCE, tol: float = 1e-9) -> float:
    """Average entanglement of the columns of ``vectors @ u``."""
    vectors = np.asarray(getattr(vectors, "vectors", vectors))
    u = np.atleast_2d(np.asarray(u, dtype=np.complex128))
    f = vectors.shape[1]
    if u.shape != (f, f) or np.max(np.abs(u.conj().T @ u - np.eye(f))) > tol:
        raise QCorrError("block rotation must be an f x f unitary")
    rotated = vectors @ u
    return float(np.mean([pure_entanglement(c, dims, kind) for c in rotated.T]))
