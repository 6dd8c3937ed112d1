import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from qcorr.errors import QCorrError
from qcorr.linalg import (
    fix_phases,
    hermitian_eig,
    matrix_sqrt_psd,
    partial_trace,
    tensor_product,
    von_neumann_entropy,
)
from qcorr.states import PSI_PLUS, make_paper_family


def rand_herm(n, rng):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return x + x.conj().T


def rand_psd(n, rng, rank=None):
    g = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    m = g @ g.conj().T
    return m / np.trace(m).real


def brute_partial_trace(m, dims, keep):
    # explicit index sum, independent of the reshape/trace implementation
    n = len(dims)
    keep = sorted(keep)
    out_dims = [dims[k] for k in keep]
    dk = int(np.prod(out_dims))
    out = np.zeros((dk, dk), dtype=complex)
    idx = list(np.ndindex(*dims))
    for r, ri in enumerate(idx):
        for c, ci in enumerate(idx):
            if all(ri[k] == ci[k] for k in range(n) if k not in keep):
                a = np.ravel_multi_index([ri[k] for k in keep], out_dims)
                b = np.ravel_multi_index([ci[k] for k in keep], out_dims)
                out[a, b] += m[r, c]
    return out


class TestHermitianEig:
    def test_pauli_z(self):
        w, v = hermitian_eig(np.diag([1.0, -1.0]))
        assert_allclose(w, [1, -1])
        assert_allclose(v, np.eye(2), atol=1e-15)

    def test_scalar_matrix(self):
        w, v = hermitian_eig(np.eye(2) / 2)
        assert_allclose(w, [0.5, 0.5])
        assert_allclose(v.conj().T @ v, np.eye(2), atol=1e-15)

    def test_a_family_spectrum(self):
        w, _ = hermitian_eig(make_paper_family(0.3).matrix)
        assert_allclose(w, [0.7, 0.3, 0, 0], atol=1e-14)

    @pytest.mark.parametrize("kernel", ["numba", "numpy"])
    def test_random_against_lapack(self, rng, kernel):
        for _ in range(100):
            n = rng.integers(1, 9)
            h = rand_herm(n, rng)
            w, v = hermitian_eig(h, kernel=kernel)
            assert np.all(np.diff(w) <= 0)
            assert_allclose(w, np.linalg.eigvalsh(h)[::-1], atol=1e-10)
            assert np.max(np.abs((v * w) @ v.conj().T - h)) < 1e-10
            assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-10

    def test_kernels_agree(self, rng):
        h = rand_herm(6, rng)
        w1, v1 = hermitian_eig(h, kernel="numba")
        w2, v2 = hermitian_eig(h, kernel="numpy")
        assert_allclose(w1, w2, atol=1e-12)
        assert_allclose(np.abs(v1.conj().T @ v2), np.eye(6), atol=1e-8)

    def test_phase_convention(self, rng):
        _, v = hermitian_eig(rand_herm(5, rng))
        k = np.argmax(np.abs(v), axis=0)
        piv = v[k, range(5)]
        assert_allclose(piv.imag, 0, atol=1e-14)
        assert np.all(piv.real > 0)

    def test_deterministic(self, rng):
        h = rand_herm(4, rng)
        a = hermitian_eig(h)
        b = hermitian_eig(h.copy())
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_rejects_non_square(self):
        with pytest.raises(QCorrError):
            hermitian_eig(np.zeros((2, 3)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(QCorrError, match="Hermitian"):
            hermitian_eig(np.array([[0, 1], [0, 0]]))

    def test_fix_phases_idempotent(self, rng):
        _, v = hermitian_eig(rand_herm(3, rng))
        assert_allclose(fix_phases(v), v)


class TestMatrixSqrt:
    def test_identity(self):
        assert_allclose(matrix_sqrt_psd(np.eye(2)), np.eye(2))

    def test_diagonal(self):
        assert_allclose(matrix_sqrt_psd(np.diag([0.25, 0.75])), np.diag([0.5, np.sqrt(0.75)]),
                        atol=1e-15)

    def test_projector(self, rng):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        v /= np.linalg.norm(v)
        p = np.outer(v, v.conj())
        assert_allclose(matrix_sqrt_psd(p), p, atol=1e-12)

    def test_random_psd(self, rng):
        for _ in range(50):
            m = rand_psd(rng.integers(1, 9), rng)
            r = matrix_sqrt_psd(m)
            assert np.max(np.abs(r @ r - m)) < 1e-9
            assert_allclose(r, r.conj().T, atol=1e-12)
            assert np.linalg.eigvalsh(r).min() > -1e-12
            assert_allclose(r, scipy.linalg.sqrtm(m), atol=1e-7)

    def test_clamps_tiny_negative(self):
        r = matrix_sqrt_psd(np.diag([1.0, -1e-14]))
        assert_allclose(r, np.diag([1.0, 0.0]))

    def test_rejects_negative(self):
        with pytest.raises(QCorrError, match="semidefinite"):
            matrix_sqrt_psd(np.diag([1.0, -0.1]))


class TestTensorProduct:
    def test_identities(self):
        assert_allclose(tensor_product(np.eye(2), np.eye(2)), np.eye(4))

    def test_diagonal(self):
        assert_allclose(tensor_product(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))

    def test_ordering(self, rng):
        a = rng.normal(size=(2, 3))
        b = rng.normal(size=(3, 2))
        t = tensor_product(a, b)
        for i, j, k, l in np.ndindex(2, 3, 3, 2):
            assert t[i * 3 + k, j * 2 + l] == a[i, j] * b[k, l]


class TestPartialTrace:
    def test_bell_reduction(self):
        bell = np.outer(PSI_PLUS, PSI_PLUS.conj())
        assert_allclose(partial_trace(bell, [2, 2], [0]), np.eye(2) / 2, atol=1e-15)

    def test_product(self, rng):
        ra, rb = rand_psd(2, rng), rand_psd(3, rng)
        assert_allclose(partial_trace(np.kron(ra, rb), [2, 3], [0]), ra, atol=1e-12)
        assert_allclose(partial_trace(np.kron(ra, rb), [2, 3], [1]), rb, atol=1e-12)

    @pytest.mark.parametrize("a", [0.0, 0.2, 0.5, 0.9])
    def test_a_family_keep_b(self, a):
        red = partial_trace(make_paper_family(a).matrix, [2, 2], [1])
        assert_allclose(red, np.diag([a / 2, 1 - a / 2]), atol=1e-15)

    @pytest.mark.parametrize("dims,keep", [([2, 2], [0]), ([2, 3], [1]), ([2, 2, 2], [0, 2]),
                                           ([2, 3, 2], [1]), ([3, 2, 2], [2, 0])])
    def test_against_brute_force(self, rng, dims, keep):
        m = rand_psd(int(np.prod(dims)), rng)
        assert_allclose(partial_trace(m, dims, keep), brute_partial_trace(m, dims, keep),
                        atol=1e-14)

    def test_keep_everything_is_identity(self, rng):
        m = rand_psd(4, rng)
        assert_allclose(partial_trace(m, [2, 2], [0, 1]), m)
        once = partial_trace(m, [2, 2], [0])
        assert_allclose(partial_trace(once, [2], [0]), once)

    def test_dimension_mismatch(self):
        with pytest.raises(QCorrError):
            partial_trace(np.eye(4), [2, 3], [0])

    def test_bad_keep(self):
        with pytest.raises(QCorrError):
            partial_trace(np.eye(4), [2, 2], [])
        with pytest.raises(QCorrError):
            partial_trace(np.eye(4), [2, 2], [2])

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), da=st.integers(1, 4), db=st.integers(1, 4))
    def test_round_trip_and_trace(self, seed, da, db):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(da, da)) + 1j * rng.normal(size=(da, da))
        b = rand_psd(db, rng)
        b *= rng.uniform(0.5, 2.0)
        red = partial_trace(tensor_product(a, b), [da, db], [0])
        assert np.max(np.abs(red - a * np.trace(b))) < 1e-12
        m = rand_psd(da * db, rng)
        assert abs(np.trace(partial_trace(m, [da, db], [1])) - np.trace(m)) < 1e-12


def test_entropy():
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0)
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert von_neumann_entropy(np.diag([1 / 3, 2 / 3])) == pytest.approx(0.9182958340544896)
