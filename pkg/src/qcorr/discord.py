"""Numerical two-qubit discord with projective measurements on A.

``D_A = S(rho_A) - S(rho) + min_n sum_{+-} p_{+-} S(rho_B|{+-} n)``.

The minimum over the Bloch direction ``n`` is found by a ``(theta, phi)``
grid followed by refinement rounds on shrinking windows around the incumbent.
The conditional-entropy grid is the hot loop; it has a jitted kernel and a
broadcasting numpy kernel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .errors import UnsupportedDimsError
from .linalg import partial_trace, von_neumann_entropy
from .states import DensityMatrix, validate

P_CUT = 1e-15


@_accel.njit
def _h2(a, d, br, bi, p):
    # entropy (bits) of the 2x2 Hermitian [[a, b], [b*, d]] / p
    if p < P_CUT:
        return 0.0
    a /= p
    d /= p
    b2 = (br * br + bi * bi) / (p * p)
    tr = a + d
    disc = math.sqrt(max(0.0, (a - d) * (a - d) + 4.0 * b2))
    s = 0.0
    for lam in (0.5 * (tr + disc), 0.5 * (tr - disc)):
        if lam > 1e-300:
            s -= lam * math.log2(lam)
    return s


@_accel.njit
def _grid_loops(blocks, thetas, phis):
    # blocks[a, b] is the (a, b) 2x2 block of rho in the A index
    out = np.empty((thetas.size, phis.size))
    rb00 = (blocks[0, 0, 0, 0] + blocks[1, 1, 0, 0]).real
    rb11 = (blocks[0, 0, 1, 1] + blocks[1, 1, 1, 1]).real
    rb01 = blocks[0, 0, 0, 1] + blocks[1, 1, 0, 1]
    for i in range(thetas.size):
        ct = math.cos(thetas[i])
        st = math.sin(thetas[i])
        for j in range(phis.size):
            # projector (I + n.sigma)/2 on A
            p00 = 0.5 * (1.0 + ct)
            p11 = 0.5 * (1.0 - ct)
            p01 = 0.5 * st * complex(math.cos(phis[j]), -math.sin(phis[j]))
            p10 = p01.conjugate()
            s00 = (p00 * blocks[0, 0, 0, 0] + p01 * blocks[1, 0, 0, 0]
                   + p10 * blocks[0, 1, 0, 0] + p11 * blocks[1, 1, 0, 0]).real
            s11 = (p00 * blocks[0, 0, 1, 1] + p01 * blocks[1, 0, 1, 1]
                   + p10 * blocks[0, 1, 1, 1] + p11 * blocks[1, 1, 1, 1]).real
            s01 = (p00 * blocks[0, 0, 0, 1] + p01 * blocks[1, 0, 0, 1]
                   + p10 * blocks[0, 1, 0, 1] + p11 * blocks[1, 1, 0, 1])
            pp = s00 + s11
            pm = 1.0 - pp
            m01 = rb01 - s01
            out[i, j] = (pp * _h2(s00, s11, s01.real, s01.imag, pp)
                         + pm * _h2(rb00 - s00, rb11 - s11, m01.real, m01.imag, pm))
    return out


def _h2_numpy(a, d, b2, p):
    with np.errstate(divide="ignore", invalid="ignore"):
        safe = np.where(p < P_CUT, 1.0, p)
        a, d, b2 = a / safe, d / safe, b2 / (safe * safe)
        disc = np.sqrt(np.maximum(0.0, (a - d) ** 2 + 4.0 * b2))
        s = np.zeros_like(a)
        for lam in (0.5 * (a + d + disc), 0.5 * (a + d - disc)):
            pos = lam > 1e-300
            s -= np.where(pos, lam * np.log2(np.where(pos, lam, 1.0)), 0.0)
    return np.where(p < P_CUT, 0.0, s)


def _grid_numpy(blocks, thetas, phis):
    ct = np.cos(thetas)[:, None]
    st = np.sin(thetas)[:, None]
    p00 = 0.5 * (1.0 + ct)
    p11 = 0.5 * (1.0 - ct)
    p01 = 0.5 * st * np.exp(-1j * phis)[None, :]
    p10 = np.conj(p01)
    proj = [[p00, p01], [p10, p11]]
    # sigma = sum_ab P_ab rho^{ba}
    sig = sum(proj[a][b][..., None, None] * blocks[b, a] for a in range(2) for b in range(2))
    rho_b = blocks[0, 0] + blocks[1, 1]
    rest = rho_b - sig
    out = 0.0
    for m in (sig, rest):
        a, d = m[..., 0, 0].real, m[..., 1, 1].real
        p = a + d
        out = out + p * _h2_numpy(a, d, np.abs(m[..., 0, 1]) ** 2, p)
    return out


def grid_kernel(name: str | None = None):
    name = name or _accel.backend()
    if name == "numba":
        return _grid_loops
    if name == "numpy":
        return _grid_numpy
    raise ValueError(f"unknown kernel {name!r}")


def conditional_entropy_grid(rho, thetas, phis, kernel: str | None = None) -> np.ndarray:
    """``sum_{+-} p S(rho_B|+-)`` on the ``thetas x phis`` grid of Bloch directions."""
    m = np.asarray(getattr(rho, "matrix", rho), dtype=np.complex128)
    blocks = np.ascontiguousarray(m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3))
    return grid_kernel(kernel)(blocks, np.asarray(thetas, float), np.asarray(phis, float))


@dataclass
class DiscordResult:
    value: float
    theta: float
    phi: float
    history: list[float] = field(default_factory=list)


def discord_a_details(rho: DensityMatrix, theta_steps: int = 64, phi_steps: int = 128,
                      refinement_rounds: int = 3, shrink: float = 4.0,
                      kernel: str | None = None) -> DiscordResult:
    """Discord subject to A, with the value after the coarse grid and each refinement.

    Each refinement round lays a fresh ``theta_steps x phi_steps`` grid over a
    window ``shrink`` times narrower than the previous one, centred on the
    incumbent. The incumbent only changes on strict improvement, and ties on
    a grid go to the smallest ``(theta index, phi index)``.
    """
    if not isinstance(rho, DensityMatrix):
        rho = validate(rho, (2, 2))
    if tuple(rho.dims) != (2, 2):
        raise UnsupportedDimsError(f"discord baseline needs dims (2, 2), got {rho.dims}")
    m = rho.matrix
    base = (von_neumann_entropy(partial_trace(m, (2, 2), [0]))
            - von_neumann_entropy(m))

    thetas = np.linspace(0.0, np.pi, theta_steps)
    phis = np.linspace(0.0, 2.0 * np.pi, phi_steps, endpoint=False)
    grid = conditional_entropy_grid(m, thetas, phis, kernel)
    k = int(np.argmin(grid))
    i, j = divmod(k, phis.size)
    best, theta, phi = float(grid[i, j]), thetas[i], phis[j]
    history = [base + best]

    half_t, half_p = np.pi / 2.0, np.pi
    for _ in range(refinement_rounds):
        half_t /= shrink
        half_p /= shrink
        ts = np.linspace(theta - half_t, theta + half_t, theta_steps)
        ps = np.linspace(phi - half_p, phi + half_p, phi_steps)
        grid = conditional_entropy_grid(m, ts, ps, kernel)
        k = int(np.argmin(grid))
        i, j = divmod(k, ps.size)
        if grid[i, j] < best:
            best, theta, phi = float(grid[i, j]), ts[i], ps[j]
        history.append(base + best)
    return DiscordResult(max(0.0, base + best), float(theta), float(phi), history)


def discord_a(rho: DensityMatrix, theta_steps: int = 64, phi_steps: int = 128,
              refinement_rounds: int = 3, kernel: str | None = None) -> float:
    return discord_a_details(rho, theta_steps, phi_steps, refinement_rounds, kernel=kernel).value
