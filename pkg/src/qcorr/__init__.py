"""Eigendecomposition-based quantum-correlation measures for small density matrices."""
from .discord import discord_a
from .entanglement import (
    block_average_entanglement,
    concurrence_mixed,
    concurrence_pure,
    entanglement_entropy_pure,
    multipartite_pure_entanglement,
)
from .errors import InvalidStateError, QCorrError, UnsupportedDimsError
from .linalg import hermitian_eig, matrix_sqrt_psd, partial_trace, tensor_product
from .measures import (
    CorrelationClass,
    MeasureConfig,
    MeasureReport,
    classify,
    q_multipartite,
    q_one_sided,
    q_strict,
    q_strict_multipartite,
    q_strict_two_qubit,
    q_subject,
    q_total,
)
from .nonorthogonality import f_entropy, f_fidelity, pair_functional, uhlmann_fidelity
from .optimize import OptimizerConfig, optimize_blocks
from .states import (
    DensityMatrix,
    PureState,
    SpectralDecomposition,
    load_state,
    make_paper_family,
    make_semi_classical,
    make_strictly_classical,
    pure_state,
    reduced_eigenvector_states,
    save_state,
    spectral_decompose,
    validate,
)

__all__ = [
    "CorrelationClass",
    "DensityMatrix",
    "InvalidStateError",
    "MeasureConfig",
    "MeasureReport",
    "OptimizerConfig",
    "PureState",
    "QCorrError",
    "SpectralDecomposition",
    "UnsupportedDimsError",
    "block_average_entanglement",
    "classify",
    "concurrence_mixed",
    "concurrence_pure",
    "discord_a",
    "entanglement_entropy_pure",
    "f_entropy",
    "f_fidelity",
    "hermitian_eig",
    "load_state",
    "make_paper_family",
    "make_semi_classical",
    "make_strictly_classical",
    "matrix_sqrt_psd",
    "multipartite_pure_entanglement",
    "optimize_blocks",
    "pair_functional",
    "partial_trace",
    "pure_state",
    "q_multipartite",
    "q_one_sided",
    "q_strict",
    "q_strict_multipartite",
    "q_strict_two_qubit",
    "q_subject",
    "q_total",
    "reduced_eigenvector_states",
    "save_state",
    "spectral_decompose",
    "tensor_product",
    "uhlmann_fidelity",
    "validate",
]

__version__ = "0.1.0"
