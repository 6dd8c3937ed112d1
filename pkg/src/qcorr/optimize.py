"""Multistart Nelder-Mead search over the unitary freedom of degenerate blocks.

A block of multiplicity ``f`` is rotated by ``U = diag(exp(i a)) G``, where
``G`` is an ordered product of ``f (f - 1) / 2`` two-level rotations, each
with a mixing angle and a relative phase. That is ``f**2`` real parameters
and the zero vector maps to the identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from .states import SpectralDecomposition


def n_params(f: int) -> int:
    return f * f


def unitary_from_params(x, f: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size != f * f:
        raise ValueError(f"U({f}) needs {f * f} parameters, got {x.size}")
    u = np.eye(f, dtype=np.complex128)
    k = 0
    npairs = f * (f - 1) // 2
    for p in range(f):
        for q in range(p + 1, f):
            c, s = np.cos(x[k]), np.sin(x[k])
            ph = np.exp(1j * x[npairs + k])
            g = np.array([[c, -ph * s], [np.conj(ph) * s, c]])
            u[:, [p, q]] = u[:, [p, q]] @ g
            k += 1
    return np.exp(1j * x[2 * npairs:])[:, None] * u


@dataclass(frozen=True)
class OptimizerConfig:
    multistart: int = 8
    max_iter: int = 2000
    tol: float = 1e-9
    xatol: float = 1e-7
    step: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.multistart < 1:
            raise ValueError("multistart must be >= 1")
        if self.tol <= 0 or self.xatol <= 0 or self.step <= 0:
            raise ValueError("optimizer tolerances and step must be positive")


@dataclass
class BlockOptimization:
    unitaries: list[np.ndarray]
    value: float
    params: np.ndarray
    starts: int = 0
    start_values: list[float] = field(default_factory=list)
    evaluations: int = 0
    converged: bool = True

    def diagnostics(self) -> dict:
        return {
            "starts": self.starts,
            "best_value": self.value,
            "start_values": list(self.start_values),
            "evaluations": self.evaluations,
            "converged": self.converged,
        }


def _free_blocks(d: SpectralDecomposition) -> list[int]:
    return [i for i, b in enumerate(d.blocks) if b.multiplicity > 1]


def params_to_unitaries(d: SpectralDecomposition, x) -> list[np.ndarray]:
    out = []
    k = 0
    for b in d.blocks:
        f = b.multiplicity
        if f == 1:
            out.append(np.eye(1, dtype=np.complex128))
        else:
            out.append(unitary_from_params(x[k:k + f * f], f))
            k += f * f
    return out


def optimize_blocks(
    d: SpectralDecomposition,
    objective: Callable[[Sequence[np.ndarray]], float],
    cfg: OptimizerConfig | None = None,
    initial=None,
    lower_bound: float | None = None,
) -> BlockOptimization:
    """Minimize ``objective(unitaries)`` over one unitary per block.

    Start 0 is ``initial`` (identity by default); the other starts draw
    parameters uniformly from ``[-pi, pi)`` with a generator seeded by
    ``cfg.seed``. The best start wins; ties go to the lowest start index.
    Nelder-Mead never returns a point worse than its first vertex, so the
    result is never worse than ``objective`` at start 0.

    With ``lower_bound`` set, the search stops as soon as a start (or the
    initial point itself) comes within ``cfg.tol`` of it, since nothing
    better exists.
    """
    cfg = cfg or OptimizerConfig()
    free = _free_blocks(d)
    npar = sum(n_params(d.blocks[i].multiplicity) for i in free)

    def fun(x):
        return float(objective(params_to_unitaries(d, x)))

    x0 = np.zeros(npar) if initial is None else np.asarray(initial, dtype=float)
    if npar == 0 or lower_bound is not None:
        v = fun(x0)
        if npar == 0 or v <= lower_bound + cfg.tol:
            return BlockOptimization(params_to_unitaries(d, x0), v, x0, starts=0,
                                     start_values=[v], evaluations=1)

    rng = np.random.default_rng(cfg.seed)
    starts = [x0] + [rng.uniform(-np.pi, np.pi, npar) for _ in range(cfg.multistart - 1)]
    best = None
    values = []
    evals = 0
    for x in starts:
        simplex = np.vstack([x, x + cfg.step * np.eye(npar)])
        res = minimize(fun, x, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "maxiter": cfg.max_iter,
                                "maxfev": 4 * cfg.max_iter, "xatol": cfg.xatol,
                                "fatol": cfg.tol})
        evals += res.nfev
        values.append(float(res.fun))
        if best is None or res.fun < best.fun:
            best = res
        if lower_bound is not None and best.fun <= lower_bound + cfg.tol:
            break
    return BlockOptimization(
        params_to_unitaries(d, best.x), float(best.fun), best.x, starts=len(starts),
        start_values=values, evaluations=evals, converged=bool(best.success),
    )
