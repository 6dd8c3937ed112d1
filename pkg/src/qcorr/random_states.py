"""Seeded samplers for states and unitaries used by the CLI and the tests."""
from __future__ import annotations

import numpy as np

from .states import (
    DensityMatrix,
    all_product_indices,
    make_semi_classical,
    make_strictly_classical,
    validate,
)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph[None, :]


def random_pure(dims, rng: np.random.Generator) -> DensityMatrix:
    d = int(np.prod(dims))
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    v /= np.linalg.norm(v)
    return validate(np.outer(v, v.conj()), dims)


def random_pure_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_density(dims, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    d = int(np.prod(dims))
    k = rank or d
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    m = g @ g.conj().T
    return validate(m / np.trace(m).real, dims)


def random_strictly_classical(dims, rng: np.random.Generator) -> DensityMatrix:
    """Mixture over every product of random orthonormal local basis vectors."""
    idx = all_product_indices(dims)
    p = rng.dirichlet(np.ones(len(idx)))
    bases = [random_unitary(d, rng) for d in dims]
    return make_strictly_classical(p, bases, idx)


def random_semi_classical_a(rng: np.random.Generator) -> DensityMatrix:
    """Two-qubit state classical on A whose two B states are mixed and non-commuting.

    The B eigenbases differ by a rotation angle in ``[0.3, 1.2]`` rad, so the
    B-side non-orthogonality stays well away from zero.
    """
    p = rng.uniform(0.25, 0.75)
    basis_a = random_unitary(2, rng)
    u = random_unitary(2, rng)
    angle = rng.uniform(0.3, 1.2)
    rot = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    states = []
    for frame in (u, u @ rot):
        mu = rng.uniform(0.6, 0.9)
        states.append([frame @ np.diag([mu, 1 - mu]) @ frame.conj().T])
    return make_semi_classical([p, 1 - p], [basis_a], states, classical=(0,),
                               indices=[(0,), (1,)])


def local_unitary_conjugate(rho: DensityMatrix, unitaries) -> DensityMatrix:
    u = np.ones((1, 1), dtype=complex)
    for v in unitaries:
        u = np.kron(u, v)
    return validate(u @ rho.matrix @ u.conj().T, rho.dims)


def swap(rho: DensityMatrix) -> DensityMatrix:
    """Exchange the two subsystems of a bipartite state."""
    da, db = rho.dims
    m = rho.matrix.reshape(da, db, da, db).transpose(1, 0, 3, 2).reshape(rho.dim, rho.dim)
    return validate(m, (db, da))
