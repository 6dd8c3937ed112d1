"""Eigendecomposition-based quantum-correlation measures.

Every measure here has the same two-part structure: the eigenvalue-weighted
entanglement of the eigenvectors, plus the weighted non-orthogonality of
their reduced states on a chosen set of subsystems. Degenerate eigenvalues
leave a unitary freedom in the eigenvectors; it is fixed by
:func:`qcorr.optimize.optimize_blocks`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import entanglement as ent
from . import nonorthogonality as nonorth
from .errors import QCorrError, UnsupportedDimsError
from .optimize import BlockOptimization, OptimizerConfig, optimize_blocks
from .states import (
    DEGENERACY_TOL,
    ZERO_CUT,
    DensityMatrix,
    SpectralDecomposition,
    reduced_state,
    spectral_decompose,
    validate,
)

SEQUENTIAL = "sequential"
JOINT = "joint"
MODES = (SEQUENTIAL, JOINT)

MAX_DIM = 16
SIDES = {"A": 0, "B": 1, 0: 0, 1: 1}


@dataclass(frozen=True)
class MeasureConfig:
    """Choices behind a measure evaluation.

    ``weights`` is either ``"product"`` (``w_ij = lambda_i lambda_j``) or a
    callable mapping the eigenvalue vector to a symmetric weight matrix.
    """

    entanglement: str = ent.CONCURRENCE
    nonorthogonality: str = nonorth.FIDELITY
    pairs: str = nonorth.UNORDERED
    weights: str | Callable = "product"
    degeneracy_tolerance: float = DEGENERACY_TOL
    zero_cut: float = ZERO_CUT
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    mode: str = SEQUENTIAL
    penalty: float = 1e3

    def __post_init__(self):
        if self.entanglement not in ent.KINDS:
            raise QCorrError(f"unknown entanglement kind {self.entanglement!r}")
        if self.nonorthogonality not in nonorth.KINDS:
            raise QCorrError(f"unknown non-orthogonality kind {self.nonorthogonality!r}")
        if self.pairs not in nonorth.PAIR_CONVENTIONS:
            raise QCorrError(f"unknown pair convention {self.pairs!r}")
        if self.mode not in MODES:
            raise QCorrError(f"unknown minimization mode {self.mode!r}")
        if self.degeneracy_tolerance <= 0 or self.zero_cut <= 0:
            raise QCorrError("tolerances must be positive")
        if not (self.weights == "product" or callable(self.weights)):
            raise QCorrError("weights must be 'product' or a callable")

    def weight_matrix(self, eigenvalues) -> np.ndarray:
        if self.weights == "product":
            return nonorth.product_weights(eigenvalues)
        return np.asarray(self.weights(np.asarray(eigenvalues)), dtype=float)

    def to_dict(self) -> dict:
        return {
            "entanglement": self.entanglement,
            "nonorthogonality": self.nonorthogonality,
            "pairs": self.pairs,
            "weights": self.weights if isinstance(self.weights, str) else "custom",
            "degeneracy_tolerance": self.degeneracy_tolerance,
            "zero_cut": self.zero_cut,
            "mode": self.mode,
            "optimizer": {
                "multistart": self.optimizer.multistart,
                "max_iter": self.optimizer.max_iter,
                "tol": self.optimizer.tol,
                "seed": self.optimizer.seed,
            },
        }


DEFAULT_CONFIG = MeasureConfig()


@dataclass
class MeasureReport:
    measure: str
    value: float
    entanglement_term: float
    nonorthogonality_terms: dict[int, float]
    decomposition_used: SpectralDecomposition
    mode: str
    optimizer_diagnostics: dict = field(default_factory=dict)

    def to_dict(self, include_decomposition: bool = True) -> dict:
        out = {
            "measure": self.measure,
            "value": self.value,
            "entanglement_term": self.entanglement_term,
            "nonorthogonality_terms": {str(k): v for k, v in self.nonorthogonality_terms.items()},
            "mode": self.mode,
            "optimizer_diagnostics": self.optimizer_diagnostics,
        }
        if include_decomposition:
            out["decomposition_used"] = self.decomposition_used.to_dict()
        return out


# --------------------------------------------------------------------------- #
# Term evaluation                                                             #
# --------------------------------------------------------------------------- #

def _check_dims(rho: DensityMatrix, nmin: int = 2, nmax: int | None = None):
    n = len(rho.dims)
    if n < nmin or (nmax is not None and n > nmax):
        want = f"exactly {nmin}" if nmax == nmin else f"at least {nmin}"
        raise UnsupportedDimsError(f"measure needs {want} subsystems, got dims {rho.dims}")
    if rho.dim > MAX_DIM:
        raise UnsupportedDimsError(f"total dimension {rho.dim} exceeds {MAX_DIM}")


def _entanglement_kind(cfg: MeasureConfig, nsub: int) -> str:
    if nsub > 2 and cfg.entanglement == ent.CONCURRENCE:
        return ent.MULTIPARTITE
    return cfg.entanglement


def entanglement_term(d: SpectralDecomposition, kind: str) -> float:
    lam = d.eigenvalues
    return float(sum(l * ent.pure_entanglement(v, d.dims, kind)
                     for l, v in zip(lam, d.eigenvectors.T)))


def block_entanglement_objective(d: SpectralDecomposition, kind: str) -> float:
    """``sum_s (1/f_s) sum_j E(phi_j^s)`` over the degenerate blocks."""
    total = 0.0
    for b in d.blocks:
        if b.multiplicity > 1:
            total += np.mean([ent.pure_entanglement(v, d.dims, kind) for v in b.vectors.T])
    return float(total)


def nonorthogonality_terms(d: SpectralDecomposition, subsystems: Sequence[int],
                           cfg: MeasureConfig) -> dict[int, float]:
    vecs = d.eigenvectors.T
    reduced = [[reduced_state(v, d.dims, [x]) for v in vecs] for x in subsystems]
    terms = nonorth.pair_terms(reduced, cfg.weight_matrix(d.eigenvalues),
                               cfg.nonorthogonality, cfg.pairs)
    return dict(zip(subsystems, terms))


def _evaluate(rho: DensityMatrix, subsystems: Sequence[int], cfg: MeasureConfig,
              name: str) -> MeasureReport:
    subsystems = tuple(sorted(set(subsystems)))
    kind = _entanglement_kind(cfg, len(rho.dims))
    d = spectral_decompose(rho, cfg.degeneracy_tolerance, cfg.zero_cut)
    diag: dict = {"degenerate_blocks": [b.multiplicity for b in d.blocks if b.multiplicity > 1]}

    if d.degenerate:
        if cfg.mode == JOINT:
            def joint(us):
                r = d.rotated(us)
                return entanglement_term(r, kind) + sum(
                    nonorthogonality_terms(r, subsystems, cfg).values())
            opt = optimize_blocks(d, joint, cfg.optimizer, lower_bound=0.0)
            diag["joint"] = opt.diagnostics()
        else:
            opt = _sequential(d, subsystems, cfg, kind, diag)
        d = d.rotated(opt.unitaries)

    e = entanglement_term(d, kind)
    f = nonorthogonality_terms(d, subsystems, cfg)
    return MeasureReport(name, e + sum(f.values()), e, f, d, cfg.mode, diag)


def _sequential(d, subsystems, cfg, kind, diag) -> BlockOptimization:
    first = optimize_blocks(d, lambda us: block_entanglement_objective(d.rotated(us), kind),
                            cfg.optimizer, lower_bound=0.0)
    diag["entanglement_stage"] = first.diagnostics()
    e_star = first.value
    slack = max(cfg.optimizer.tol, 1e-9)

    def penalized(us):
        r = d.rotated(us)
        excess = block_entanglement_objective(r, kind) - e_star - slack
        f = sum(nonorthogonality_terms(r, subsystems, cfg).values())
        return f + cfg.penalty * max(0.0, excess)

    second = optimize_blocks(d, penalized, cfg.optimizer, initial=first.params,
                             lower_bound=0.0)
    diag["nonorthogonality_stage"] = second.diagnostics()
    return second


def _as_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else validate(rho, None)


# --------------------------------------------------------------------------- #
# Measures                                                                    #
# --------------------------------------------------------------------------- #

def q_total(rho: DensityMatrix, cfg: MeasureConfig = DEFAULT_CONFIG) -> MeasureReport:
    """Symmetric bipartite measure with non-orthogonality on both sides."""
    rho = _as_state(rho)
    _check_dims(rho, 2, 2)
    return _evaluate(rho, (0, 1), cfg, "q_total")


def q_one_sided(rho: DensityMatrix, side="A", cfg: MeasureConfig = DEFAULT_CONFIG) -> MeasureReport:
    """Measure subject to one side: non-orthogonality on ``side`` only.

    ``side="A"`` vanishes exactly on states classical on A.
    """
    rho = _as_state(rho)
    _check_dims(rho, 2, 2)
    if side not in SIDES:
        raise QCorrError(f"side must be 'A' or 'B', got {side!r}")
    x = SIDES[side]
    return _evaluate(rho, (x,), cfg, "q_qc" if x == 0 else "q_cq")


def q_strict(rho: DensityMatrix, cfg: MeasureConfig = DEFAULT_CONFIG) -> float:
    """Geometric mean of the two one-sided measures."""
    qa = q_one_sided(rho, "A", cfg).value
    qb = q_one_sided(rho, "B", cfg).value
    return math.sqrt(max(qa, 0.0) * max(qb, 0.0))


def q_multipartite(rho: DensityMatrix, cfg: MeasureConfig = DEFAULT_CONFIG) -> MeasureReport:
    rho = _as_state(rho)
    _check_dims(rho, 2)
    return _evaluate(rho, range(len(rho.dims)), cfg, "q_multipartite")


def q_subject(rho: DensityMatrix, subsystems, cfg: MeasureConfig = DEFAULT_CONFIG) -> MeasureReport:
    """Multipartite measure keeping only the reduced states of ``subsystems``."""
    rho = _as_state(rho)
    _check_dims(rho, 2)
    xs = [subsystems] if np.isscalar(subsystems) else list(subsystems)
    if not xs or any(x < 0 or x >= len(rho.dims) for x in xs):
        raise QCorrError(f"invalid subsystem set {subsystems} for dims {rho.dims}")
    return _evaluate(rho, xs, cfg, "q_subject")


def q_strict_multipartite(rho: DensityMatrix, cfg: MeasureConfig = DEFAULT_CONFIG) -> float:
    """``N``-th root of the product of the single-subsystem measures."""
    rho = _as_state(rho)
    _check_dims(rho, 2)
    vals = [max(q_subject(rho, [x], cfg).value, 0.0) for x in range(len(rho.dims))]
    return float(np.prod(vals) ** (1.0 / len(vals)))


def q_strict_two_qubit(rho: DensityMatrix, cfg: MeasureConfig = DEFAULT_CONFIG) -> float:
    """Two-qubit shortcut: nondegenerate eigenvectors contribute ``lambda_i C(phi_i)``,
    a degenerate block ``s`` contributes ``lambda_s f_s C(rho_s)`` where
    ``rho_s`` is the uniform mixture of its eigenvectors.
    """
    rho = _as_state(rho)
    if rho.dims != (2, 2):
        raise UnsupportedDimsError(f"two-qubit measure needs dims (2, 2), got {rho.dims}")
    d = spectral_decompose(rho, cfg.degeneracy_tolerance, cfg.zero_cut)
    total = 0.0
    for b in d.blocks:
        if b.multiplicity == 1:
            total += b.eigenvalue * ent.concurrence_pure(b.vectors[:, 0], (2, 2))
        else:
            rho_s = (b.vectors @ b.vectors.conj().T) / b.multiplicity
            total += b.eigenvalue * b.multiplicity * ent.concurrence_mixed(rho_s, (2, 2))
    return float(total)


# --------------------------------------------------------------------------- #
# Classification                                                              #
# --------------------------------------------------------------------------- #

STRICTLY_CLASSICAL = "strictly_classical"
SEMI_CLASSICAL = "semi_classical"
QUANTUM = "quantum"


@dataclass(frozen=True)
class CorrelationClass:
    kind: str
    classical_subsystems: frozenset
    witness_values: dict

    def to_dict(self) -> dict:
        return {"kind": self.kind, "classical_subsystems": sorted(self.classical_subsystems),
                "witness_values": self.witness_values}


def classify(rho: DensityMatrix, cfg: MeasureConfig = DEFAULT_CONFIG,
             threshold: float = 1e-6) -> CorrelationClass:
    """Strictly classical, semi-classical (with its classical subsystems) or quantum."""
    rho = _as_state(rho)
    n = len(rho.dims)
    _check_dims(rho, 2)
    total = (q_total(rho, cfg) if n == 2 else q_multipartite(rho, cfg)).value
    witness = {"total": total}
    if total < threshold:
        return CorrelationClass(STRICTLY_CLASSICAL, frozenset(range(n)), witness)
    classical = set()
    for x in range(n):
        v = q_subject(rho, [x], cfg).value
        witness[f"subject_{x}"] = v
        if v < threshold:
            classical.add(x)
    kind = SEMI_CLASSICAL if classical else QUANTUM
    return CorrelationClass(kind, frozenset(classical), witness)


MEASURES = {
    "q_total": lambda r, c: q_total(r, c),
    "q_qc": lambda r, c: q_one_sided(r, "A", c),
    "q_cq": lambda r, c: q_one_sided(r, "B", c),
    "q_s": q_strict,
    "q_s2": q_strict_two_qubit,
    "q_mp": q_multipartite,
    "q_smp": q_strict_multipartite,
}


def with_mode(cfg: MeasureConfig, mode: str) -> MeasureConfig:
    return replace(cfg, mode=mode)
