"""Density matrices, pure states, spectral decompositions and fixture states."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import InvalidStateError, QCorrError
from .linalg import hermitian_eig, tensor_product

STATE_TOL = 1e-10
DEGENERACY_TOL = 1e-8
ZERO_CUT = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix with its subsystem dimensions."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nsub(self) -> int:
        return len(self.dims)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.projector(), self.dims)


def _dims_tuple(dims, size: int) -> tuple[int, ...]:
    if dims is None:
        dims = (size,)
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise InvalidStateError(f"invalid subsystem dims {dims}")
    if int(np.prod(dims)) != size:
        raise InvalidStateError(f"dims {dims} do not multiply to matrix dimension {size}")
    return dims


def validate(matrix, dims=None, tol: float = STATE_TOL) -> DensityMatrix:
    """Check the density-matrix invariants and wrap ``matrix``.

    Raises
    ------
    InvalidStateError
        Naming the first violated invariant: shape, finiteness, dims,
        Hermiticity, unit trace or positivity.
    """
    if isinstance(matrix, DensityMatrix):
        dims = matrix.dims if dims is None else dims
        matrix = matrix.matrix
    m = np.array(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("density matrix has non-finite entries")
    dims = _dims_tuple(dims, m.shape[0])
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise InvalidStateError(f"density matrix trace is {tr!r}, expected 1")
    w, _ = hermitian_eig(m, tol=tol)
    if w[-1] < -tol:
        raise InvalidStateError(f"density matrix has negative eigenvalue {w[-1]:.3e}")
    m = 0.5 * (m + m.conj().T)
    m.flags.writeable = False
    return DensityMatrix(m, dims)


def pure_state(amplitudes, dims=None, tol: float = STATE_TOL) -> PureState:
    v = np.array(amplitudes, dtype=np.complex128).reshape(-1)
    dims = _dims_tuple(dims, v.size)
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise InvalidStateError(f"pure state norm is {np.linalg.norm(v)!r}, expected 1")
    v.flags.writeable = False
    return PureState(v, dims)


@dataclass(frozen=True, eq=False)
class EigenBlock:
    """One eigenvalue and an orthonormal basis (columns) of its eigenspace."""

    eigenvalue: float
    vectors: np.ndarray

    @property
    def multiplicity(self) -> int:
        return self.vectors.shape[1]


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    blocks: tuple[EigenBlock, ...]
    dims: tuple[int, ...]
    degeneracy_tolerance: float = DEGENERACY_TOL

    @property
    def rank(self) -> int:
        return sum(b.multiplicity for b in self.blocks)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalue of every retained eigenvector, block order."""
        return np.concatenate([np.full(b.multiplicity, b.eigenvalue) for b in self.blocks])

    @property
    def eigenvectors(self) -> np.ndarray:
        return np.hstack([b.vectors for b in self.blocks])

    @property
    def degenerate(self) -> bool:
        return any(b.multiplicity > 1 for b in self.blocks)

    def states(self) -> list[PureState]:
        return [PureState(v, self.dims) for v in self.eigenvectors.T]

    def rotated(self, unitaries: Sequence[np.ndarray]) -> "SpectralDecomposition":
        """Apply one unitary per block: ``Phi -> Phi @ U``."""
        if len(unitaries) != len(self.blocks):
            raise QCorrError("need exactly one unitary per block")
        blocks = tuple(
            EigenBlock(b.eigenvalue, b.vectors @ u) for b, u in zip(self.blocks, unitaries)
        )
        return SpectralDecomposition(blocks, self.dims, self.degeneracy_tolerance)

    def reassemble(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "degeneracy_tolerance": self.degeneracy_tolerance,
            "blocks": [
                {
                    "eigenvalue": b.eigenvalue,
                    "multiplicity": b.multiplicity,
                    "eigenvectors": [[[float(z.real), float(z.imag)] for z in col] for col in b.vectors.T],
                }
                for b in self.blocks
            ],
        }


def _orthonormalize(v: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(v)
    # keep the original column orientation
    d = np.diag(r)
    ph = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * ph[None, :]


def spectral_decompose(
    rho: DensityMatrix,
    degeneracy_tolerance: float = DEGENERACY_TOL,
    zero_cut: float = ZERO_CUT,
) -> SpectralDecomposition:
    """Group the nonzero spectrum of ``rho`` into degeneracy blocks.

    Eigenvalues ``<= zero_cut`` are dropped. A block collects consecutive
    eigenvalues that all lie within ``degeneracy_tolerance`` of its largest one.
    """
    w, v = hermitian_eig(rho.matrix)
    keep = w > zero_cut
    w, v = w[keep], v[:, keep]
    blocks = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[start] - w[i] > degeneracy_tolerance:
            vecs = v[:, start:i]
            if vecs.shape[1] > 1:
                vecs = _orthonormalize(vecs)
            blocks.append(EigenBlock(float(np.mean(w[start:i])), vecs))
            start = i
    return SpectralDecomposition(tuple(blocks), tuple(rho.dims), degeneracy_tolerance)


def reduced_state(vec, dims, keep) -> np.ndarray:
    """Reduced density matrix of the pure state ``vec`` on ``keep``."""
    keep = sorted(keep)
    rest = [i for i in range(len(dims)) if i not in keep]
    t = np.asarray(vec, dtype=np.complex128).reshape(dims).transpose(keep + rest)
    dk = int(np.prod([dims[k] for k in keep]))
    m = t.reshape(dk, -1)
    return m @ m.conj().T


def reduced_eigenvector_states(d: SpectralDecomposition, x) -> list[DensityMatrix]:
    """``Tr_{not x} |phi_i><phi_i|`` for every eigenvector, in block order."""
    keep = [x] if np.isscalar(x) else list(x)
    if any(k < 0 or k >= len(d.dims) for k in keep):
        raise QCorrError(f"invalid subsystem {x} for dims {d.dims}")
    sub = tuple(d.dims[k] for k in sorted(keep))
    return [DensityMatrix(reduced_state(v, d.dims, keep), sub) for v in d.eigenvectors.T]


# --------------------------------------------------------------------------- #
# Fixture states                                                              #
# --------------------------------------------------------------------------- #

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
GHZ3 = (np.eye(8)[0] + np.eye(8)[7]).astype(complex) / np.sqrt(2)


def bell_state() -> DensityMatrix:
    """``|psi+><psi+|`` with ``|psi+> = (|01> + |10>)/sqrt(2)``."""
    return validate(np.outer(PSI_PLUS, PSI_PLUS.conj()), (2, 2))


def make_paper_family(a: float) -> DensityMatrix:
    """``a |psi+><psi+| + (1 - a) |11><11|`` on two qubits."""
    a = float(a)
    if not 0.0 <= a <= 1.0:
        raise QCorrError(f"family parameter must lie in [0, 1], got {a}")
    m = np.zeros((4, 4), dtype=complex)
    m[1:3, 1:3] = a / 2.0
    m[3, 3] = 1.0 - a
    return validate(m, (2, 2))


def _check_probabilities(p) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or np.any(p <= 0) or abs(p.sum() - 1.0) > 1e-10:
        raise QCorrError("probabilities must be positive and sum to 1")
    return p


def _check_basis(b, tol: float = 1e-10) -> np.ndarray:
    b = np.asarray(b, dtype=np.complex128)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise QCorrError("a basis must be a square matrix of column vectors")
    if np.max(np.abs(b.conj().T @ b - np.eye(b.shape[0]))) > tol:
        raise QCorrError("basis is not orthonormal")
    return b


def _default_indices(p, nsub: int, dmin: int):
    if len(p) > dmin:
        raise QCorrError("more terms than basis vectors; pass explicit indices")
    return [(k,) * nsub for k in range(len(p))]


def make_strictly_classical(probabilities, bases, indices=None) -> DensityMatrix:
    """``sum_k p_k (x)_alpha |psi_k^alpha><psi_k^alpha|``.

    ``bases[alpha]`` holds an orthonormal basis of subsystem ``alpha`` as
    columns. Term ``k`` uses column ``indices[k][alpha]`` of each basis; by
    default term ``k`` takes column ``k`` everywhere.
    """
    p = _check_probabilities(probabilities)
    bases = [_check_basis(b) for b in bases]
    dims = tuple(b.shape[0] for b in bases)
    if indices is None:
        indices = _default_indices(p, len(bases), min(dims))
    if len(indices) != len(p):
        raise QCorrError("need one index tuple per probability")
    m = np.zeros((int(np.prod(dims)),) * 2, dtype=complex)
    for pk, idx in zip(p, indices):
        vec = np.ones(1, dtype=complex)
        for b, i in zip(bases, idx):
            vec = np.kron(vec, b[:, i])
        m += pk * np.outer(vec, vec.conj())
    return validate(m, dims)


def make_semi_classical(probabilities, classical_bases, quantum_states, classical=(0,), dims=None,
                        indices=None) -> DensityMatrix:
    """``sum_k p_k [(x)_alpha |psi_k^alpha><psi_k^alpha|] (x) [(x)_beta rho_k^beta]``.

    Parameters
    ----------
    probabilities : sequence of float
    classical_bases : sequence of ndarray
        Orthonormal basis (columns) of each classical subsystem.
    quantum_states : sequence of sequence of array_like
        ``quantum_states[k][j]`` is the density matrix of the ``j``-th
        quantum subsystem in term ``k``.
    classical : sequence of int
        Positions of the classical subsystems in the full ordering.
    indices : sequence of tuple, optional
        Basis column used by term ``k`` on each classical subsystem.
    """
    p = _check_probabilities(probabilities)
    bases = [_check_basis(b) for b in classical_bases]
    classical = tuple(classical)
    if len(classical) != len(bases):
        raise QCorrError("one basis per classical subsystem")
    if len(quantum_states) != len(p):
        raise QCorrError("one set of quantum states per probability")
    nq = len(quantum_states[0])
    nsub = len(bases) + nq
    if indices is None:
        indices = _default_indices(p, len(bases), min(b.shape[0] for b in bases))
    total = None
    for k, pk in enumerate(p):
        qs = [validate(s, None).matrix for s in quantum_states[k]]
        if len(qs) != nq:
            raise QCorrError("every term needs the same number of quantum states")
        factors = []
        ci = qi = 0
        for pos in range(nsub):
            if pos in classical:
                v = bases[ci][:, indices[k][ci]]
                factors.append(np.outer(v, v.conj()))
                ci += 1
            else:
                factors.append(qs[qi])
                qi += 1
        term = factors[0]
        for f in factors[1:]:
            term = tensor_product(term, f)
        total = pk * term if total is None else total + pk * term
    if dims is None:
        dims = []
        ci = qi = 0
        for pos in range(nsub):
            if pos in classical:
                dims.append(bases[ci].shape[0])
                ci += 1
            else:
                dims.append(validate(quantum_states[0][qi]).dim)
                qi += 1
    return validate(total, dims)


def all_product_indices(dims) -> list[tuple[int, ...]]:
    return list(itertools.product(*[range(d) for d in dims]))


# --------------------------------------------------------------------------- #
# State files                                                                 #
# --------------------------------------------------------------------------- #

def state_to_json(rho: DensityMatrix) -> str:
    """Serialize to the ``{"dims": ..., "matrix": [[[re, im], ...], ...]}`` format.

    ``repr`` of a Python float is the shortest string that round-trips, which
    is at most 17 significant digits.
    """
    rows = ",\n    ".join(
        "[" + ", ".join(f"[{float(z.real)!r}, {float(z.imag)!r}]" for z in row) + "]" for row in rho.matrix
    )
    dims = ", ".join(str(d) for d in rho.dims)
    return f'{{\n  "dims": [{dims}],\n  "matrix": [\n    {rows}\n  ]\n}}\n'


def state_from_dict(obj) -> DensityMatrix:
    try:
        dims = [int(d) for d in obj["dims"]]
        raw = np.asarray(obj["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStateError(f"malformed state object: {exc}") from exc
    if raw.ndim != 3 or raw.shape[2] != 2:
        raise InvalidStateError("matrix entries must be [re, im] pairs")
    m = np.empty(raw.shape[:2], dtype=np.complex128)
    m.real = raw[..., 0]
    m.imag = raw[..., 1]
    return validate(m, dims)


def load_state(path) -> DensityMatrix:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidStateError(f"{path}: not valid JSON ({exc})") from exc
    return state_from_dict(obj)


def save_state(rho: DensityMatrix, path) -> None:
    Path(path).write_text(state_to_json(rho))
