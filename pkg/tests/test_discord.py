import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from qcorr.discord import conditional_entropy_grid, discord_a, discord_a_details
from qcorr.errors import UnsupportedDimsError
from qcorr.linalg import partial_trace, von_neumann_entropy
from qcorr.random_states import (
    local_unitary_conjugate,
    random_density,
    random_strictly_classical,
    random_unitary,
)
from qcorr.states import bell_state, make_paper_family, validate


def conditional_entropy_oracle(m, theta, phi):
    # explicit projectors and partial traces
    n = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    sig = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    ns = sum(c * s for c, s in zip(n, sig))
    out = 0.0
    for sign in (1, -1):
        proj = np.kron((np.eye(2) + sign * ns) / 2, np.eye(2))
        post = proj @ m @ proj
        p = np.trace(post).real
        if p > 1e-15:
            out += p * von_neumann_entropy(partial_trace(post / p, (2, 2), [1]))
    return out


class TestValues:
    def test_bell(self):
        assert discord_a(bell_state()) == pytest.approx(1.0, abs=1e-9)

    def test_product_pure(self):
        v = np.zeros(4)
        v[3] = 1
        assert discord_a(validate(np.outer(v, v), (2, 2))) < 1e-9

    def test_maximally_mixed(self):
        assert discord_a(validate(np.eye(4) / 4, (2, 2))) < 1e-9

    def test_classical_on_a(self, rng):
        for _ in range(10):
            assert discord_a(random_strictly_classical((2, 2), rng)) < 1e-3

    def test_family_endpoints_and_monotone(self):
        vals = [discord_a(make_paper_family(a)) for a in np.linspace(0, 1, 11)]
        assert vals[0] == pytest.approx(0.0, abs=1e-9)
        assert vals[-1] == pytest.approx(1.0, abs=1e-9)
        assert np.all(np.diff(vals) > 0)

    def test_wrong_dims(self):
        with pytest.raises(UnsupportedDimsError):
            discord_a(validate(np.eye(8) / 8, (2, 4)))


class TestGrid:
    def test_against_oracle(self, rng):
        m = random_density((2, 2), rng).matrix
        thetas = np.array([0.0, 0.4, 1.3, np.pi])
        phis = np.array([0.0, 2.1, 5.0])
        grid = conditional_entropy_grid(m, thetas, phis)
        want = [[conditional_entropy_oracle(m, t, p) for p in phis] for t in thetas]
        assert_allclose(grid, want, atol=1e-10)

    def test_kernels_agree(self, rng):
        m = random_density((2, 2), rng).matrix
        thetas = np.linspace(0, np.pi, 17)
        phis = np.linspace(0, 2 * np.pi, 9)
        assert_allclose(conditional_entropy_grid(m, thetas, phis, "numba"),
                        conditional_entropy_grid(m, thetas, phis, "numpy"), atol=1e-12)

    def test_history_non_increasing(self, rng):
        res = discord_a_details(random_density((2, 2), rng))
        assert len(res.history) == 4
        assert np.all(np.diff(res.history) <= 0)
        assert res.value == pytest.approx(max(0.0, res.history[-1]))


class TestProperties:
    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_nonnegative_and_bounded(self, seed):
        rng = np.random.default_rng(seed)
        d = discord_a(random_density((2, 2), rng, rank=int(rng.integers(1, 5))))
        assert 0.0 <= d <= 1.0 + 1e-9

    def test_local_unitary_invariance(self, rng):
        for _ in range(5):
            rho = random_density((2, 2), rng)
            rot = local_unitary_conjugate(rho, [random_unitary(2, rng), random_unitary(2, rng)])
            assert discord_a(rot) == pytest.approx(discord_a(rho), abs=1e-6)

    def test_kernel_choice_does_not_change_value(self, rng):
        rho = random_density((2, 2), rng)
        assert discord_a(rho, kernel="numpy") == pytest.approx(discord_a(rho, kernel="numba"), abs=1e-12)
