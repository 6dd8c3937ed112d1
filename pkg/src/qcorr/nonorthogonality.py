"""Local non-orthogonality functionals and the weighted pair sum."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import QCorrError
from .linalg import eigh_unchecked, entropy_of_spectrum, matrix_sqrt_psd

FIDELITY = "fidelity_based"
ENTROPY = "entropy_based"
KINDS = (FIDELITY, ENTROPY)

UNORDERED = "unordered_pairs"
ORDERED = "ordered_pairs"
PAIR_CONVENTIONS = (UNORDERED, ORDERED)

SQRT_CUT = 1e-12


def _pair(rho_i, rho_j):
    a = np.asarray(getattr(rho_i, "matrix", rho_i), dtype=np.complex128)
    b = np.asarray(getattr(rho_j, "matrix", rho_j), dtype=np.complex128)
    if a.shape != b.shape:
        raise QCorrError(f"state dimensions differ: {a.shape} vs {b.shape}")
    return a, b


def fidelity_operator(rho_i, rho_j) -> np.ndarray:
    """``M = sqrt(sqrt(rho_i) rho_j sqrt(rho_i))``."""
    a, b = _pair(rho_i, rho_j)
    s = matrix_sqrt_psd(a, SQRT_CUT)
    return matrix_sqrt_psd(s @ b @ s, SQRT_CUT)


def _fidelity_spectrum(a, b) -> np.ndarray:
    s = matrix_sqrt_psd(a, SQRT_CUT)
    h = s @ b @ s
    w, _ = eigh_unchecked(0.5 * (h + h.conj().T))
    return np.sqrt(np.where(w <= SQRT_CUT, 0.0, w))


def uhlmann_fidelity(rho_i, rho_j) -> float:
    """Root fidelity ``Tr sqrt(sqrt(rho_i) rho_j sqrt(rho_i))``, clipped to [0, 1]."""
    a, b = _pair(rho_i, rho_j)
    return float(np.clip(np.sum(_fidelity_spectrum(a, b)), 0.0, 1.0))


def f_fidelity(rho_i, rho_j) -> float:
    """``2 F (1 - F)`` with ``F`` the root fidelity; zero for equal or orthogonal states."""
    fb = uhlmann_fidelity(rho_i, rho_j)
    return 2.0 * fb * (1.0 - fb)


def f_entropy(rho_i, rho_j) -> float:
    """``2 S (1 - S)`` with ``S = -Tr M log2 M`` on the fidelity operator ``M``.

    Unlike :func:`f_fidelity` this does not vanish for equal mixed states in
    general (only when ``S`` happens to be 0 or 1); it is an opt-in variant.
    """
    a, b = _pair(rho_i, rho_j)
    s = entropy_of_spectrum(_fidelity_spectrum(a, b))
    return 2.0 * s * (1.0 - s)


FUNCTIONALS = {FIDELITY: f_fidelity, ENTROPY: f_entropy}


def product_weights(eigenvalues) -> np.ndarray:
    lam = np.asarray(eigenvalues, dtype=float)
    return np.outer(lam, lam)


def pair_terms(reduced: Sequence, weights, kind: str = FIDELITY,
               pairs: str = UNORDERED) -> list[float]:
    """Per-subsystem weighted pair sums ``sum w_ij F(rho_xi, rho_xj)``.

    ``reduced[x]`` lists the reduced state of every eigenvector on subsystem
    ``x``; ``None`` marks a subsystem that is left out and contributes 0.
    With ``unordered_pairs`` only ``i < j`` is summed; ``ordered_pairs`` runs
    over all ``(i, j)`` including the diagonal.
    """
    if kind not in FUNCTIONALS:
        raise QCorrError(f"unknown non-orthogonality kind {kind!r}")
    if pairs not in PAIR_CONVENTIONS:
        raise QCorrError(f"unknown pair convention {pairs!r}")
    func = FUNCTIONALS[kind]
    w = np.asarray(weights, dtype=float)
    out = []
    for states in reduced:
        if states is None:
            out.append(0.0)
            continue
        n = len(states)
        if w.shape != (n, n):
            raise QCorrError(f"weights shape {w.shape} does not match {n} states")
        wp = w + w.T if pairs == ORDERED else w
        total = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                # F is symmetric, so (i, j) and (j, i) share one evaluation
                total += wp[i, j] * func(states[i], states[j])
        if pairs == ORDERED and kind != FIDELITY:
            # the fidelity diagonal is identically zero
            total += sum(w[i, i] * func(states[i], states[i]) for i in range(n))
        out.append(float(total))
    return out


def pair_functional(reduced: Sequence, weights, kind: str = FIDELITY,
                    pairs: str = UNORDERED) -> float:
    return float(sum(pair_terms(reduced, weights, kind, pairs)))
