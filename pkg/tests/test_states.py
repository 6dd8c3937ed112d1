import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcorr.errors import InvalidStateError, QCorrError
from qcorr.random_states import random_density, random_strictly_classical, random_unitary
from qcorr.states import (
    KET0,
    KET1,
    PSI_PLUS,
    bell_state,
    load_state,
    make_paper_family,
    make_semi_classical,
    make_strictly_classical,
    pure_state,
    reduced_eigenvector_states,
    save_state,
    spectral_decompose,
    state_from_dict,
    state_to_json,
    validate,
)

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
PLUS = H[:, 0]
MINUS = H[:, 1]


def proj(v):
    return np.outer(v, np.conj(v))


class TestValidate:
    def test_maximally_mixed(self):
        rho = validate(np.eye(4) / 4, [2, 2])
        assert rho.dims == (2, 2)

    def test_negative_eigenvalue(self):
        with pytest.raises(InvalidStateError, match="negative eigenvalue"):
            validate(np.diag([0.5, 0.6, 0, -0.1]), [2, 2])

    def test_a_family_state(self):
        validate(make_paper_family(0.5).matrix, [2, 2])

    def test_trace(self):
        with pytest.raises(InvalidStateError, match="trace"):
            validate(np.eye(2), [2])

    def test_hermitian(self):
        with pytest.raises(InvalidStateError, match="Hermitian"):
            validate(np.array([[0.5, 0.1], [0.0, 0.5]]), [2])

    def test_dims(self):
        with pytest.raises(InvalidStateError, match="dims"):
            validate(np.eye(4) / 4, [2, 3])

    def test_nan(self):
        with pytest.raises(InvalidStateError, match="non-finite"):
            validate(np.full((2, 2), np.nan), [2])

    def test_pure_state_norm(self):
        pure_state(PSI_PLUS, [2, 2])
        with pytest.raises(InvalidStateError):
            pure_state([1, 1], [2])


class TestSpectralDecompose:
    def test_nondegenerate(self):
        d = spectral_decompose(make_paper_family(0.3))
        assert d.rank == 2
        assert [b.multiplicity for b in d.blocks] == [1, 1]
        assert_allclose([b.eigenvalue for b in d.blocks], [0.7, 0.3])
        # eigenvector for 0.3 is psi+, for 0.7 it is |11>
        assert abs(np.vdot(PSI_PLUS, d.blocks[1].vectors[:, 0])) == pytest.approx(1.0)
        assert abs(d.blocks[0].vectors[3, 0]) == pytest.approx(1.0)

    def test_degenerate(self):
        d = spectral_decompose(make_paper_family(0.5))
        assert d.rank == 2
        assert len(d.blocks) == 1
        assert d.blocks[0].multiplicity == 2
        assert d.blocks[0].eigenvalue == pytest.approx(0.5)

    def test_pure(self):
        d = spectral_decompose(bell_state())
        assert d.rank == 1 and d.blocks[0].eigenvalue == pytest.approx(1.0)

    def test_reassemble(self, rng):
        for rank in (1, 2, 3, 4):
            rho = random_density([2, 2], rng, rank=rank)
            d = spectral_decompose(rho)
            assert d.rank == rank
            assert np.max(np.abs(d.reassemble() - rho.matrix)) < 1e-9
            v = d.eigenvectors
            assert np.max(np.abs(v.conj().T @ v - np.eye(rank))) < 1e-9
            assert abs(sum(b.eigenvalue * b.multiplicity for b in d.blocks) - 1) < 1e-9

    def test_grouping_stable_under_small_perturbation(self, rng):
        tol = 1e-8
        u = random_unitary(4, rng)
        for eps in (0.0, tol / 20, -tol / 10):
            lam = np.array([0.4 + eps, 0.4, 0.2, 0.0])
            rho = validate(u @ np.diag(lam / lam.sum()) @ u.conj().T, [2, 2])
            d = spectral_decompose(rho, tol)
            assert [b.multiplicity for b in d.blocks] == [2, 1]

    def test_blocks_separated(self, rng):
        rho = random_density([2, 2], rng)
        d = spectral_decompose(rho)
        vals = [b.eigenvalue for b in d.blocks]
        assert all(a - b > d.degeneracy_tolerance for a, b in zip(vals, vals[1:]))

    def test_rotation(self):
        d = spectral_decompose(make_paper_family(0.5))
        u = random_unitary(2, np.random.default_rng(1))
        r = d.rotated([u])
        assert_allclose(r.reassemble(), d.reassemble(), atol=1e-14)


class TestReducedEigenvectorStates:
    def test_bell(self):
        (ra,) = reduced_eigenvector_states(spectral_decompose(bell_state()), 0)
        assert_allclose(ra.matrix, np.eye(2) / 2, atol=1e-15)

    def test_product(self):
        rho = validate(proj(np.kron(KET1, KET1)), [2, 2])
        (ra,) = reduced_eigenvector_states(spectral_decompose(rho), 0)
        assert_allclose(ra.matrix, proj(KET1), atol=1e-15)

    def test_a_family_matrix(self):
        d = spectral_decompose(make_paper_family(0.3))
        ra = reduced_eigenvector_states(d, 0)
        # block order: 0.7 -> |11>, 0.3 -> psi+
        assert_allclose(ra[0].matrix, proj(KET1), atol=1e-14)
        assert_allclose(ra[1].matrix, np.eye(2) / 2, atol=1e-14)

    def test_invalid_subsystem(self):
        with pytest.raises(QCorrError):
            reduced_eigenvector_states(spectral_decompose(bell_state()), 2)


class TestFixtures:
    def test_a_family_endpoints(self):
        assert_allclose(make_paper_family(1).matrix, proj(PSI_PLUS), atol=1e-15)
        assert_allclose(make_paper_family(0).matrix, proj(np.kron(KET1, KET1)))

    def test_a_family_range(self):
        with pytest.raises(QCorrError):
            make_paper_family(1.2)

    def test_strictly_classical_computational(self):
        rho = make_strictly_classical([0.5, 0.5], [np.eye(2), np.eye(2)])
        assert_allclose(rho.matrix, np.diag([0.5, 0, 0, 0.5]))

    def test_strictly_classical_single_term(self):
        rho = make_strictly_classical([1.0], [H, np.eye(2)])
        assert_allclose(rho.matrix, proj(np.kron(PLUS, KET0)), atol=1e-15)

    def test_strictly_classical_hadamard(self):
        rho = make_strictly_classical([1 / 3, 2 / 3], [H, np.eye(2)])
        want = proj(np.kron(PLUS, KET0)) / 3 + 2 * proj(np.kron(MINUS, KET1)) / 3
        assert_allclose(rho.matrix, want, atol=1e-15)

    def test_strictly_classical_commutes_with_its_projectors(self, rng):
        bases = [random_unitary(2, rng), random_unitary(2, rng)]
        idx = [(0, 0), (0, 1), (1, 0), (1, 1)]
        rho = make_strictly_classical(rng.dirichlet(np.ones(4)), bases, idx)
        for i, j in idx:
            p = proj(np.kron(bases[0][:, i], bases[1][:, j]))
            assert np.max(np.abs(rho.matrix @ p - p @ rho.matrix)) < 1e-10

    def test_rejects_non_orthonormal_basis(self):
        with pytest.raises(QCorrError, match="orthonormal"):
            make_strictly_classical([1.0], [np.array([[1, 1], [0, 1]]), np.eye(2)])

    def test_rejects_bad_probabilities(self):
        with pytest.raises(QCorrError):
            make_strictly_classical([0.7, 0.7], [np.eye(2), np.eye(2)])
        with pytest.raises(QCorrError):
            make_strictly_classical([1.0, 0.0], [np.eye(2), np.eye(2)])

    def test_semi_classical_reduces_to_strict(self):
        semi = make_semi_classical([0.3, 0.7], [H], [[proj(KET0)], [proj(KET1)]])
        strict = make_strictly_classical([0.3, 0.7], [H, np.eye(2)])
        assert_allclose(semi.matrix, strict.matrix, atol=1e-15)

    def test_semi_classical_mixed_b(self):
        rho = make_semi_classical([0.5, 0.5], [np.eye(2)], [[proj(KET0)], [proj(PLUS)]])
        want = 0.5 * np.kron(proj(KET0), proj(KET0)) + 0.5 * np.kron(proj(KET1), proj(PLUS))
        assert_allclose(rho.matrix, want, atol=1e-15)

    def test_semi_classical_product(self):
        rho = make_semi_classical([0.5, 0.5], [np.eye(2)], [[np.eye(2) / 2], [np.eye(2) / 2]])
        assert_allclose(rho.matrix, np.kron(np.diag([0.5, 0.5]), np.eye(2) / 2))

    def test_semi_classical_on_b(self):
        rho = make_semi_classical([0.5, 0.5], [np.eye(2)], [[proj(KET0)], [proj(PLUS)]],
                                  classical=(1,))
        want = 0.5 * np.kron(proj(KET0), proj(KET0)) + 0.5 * np.kron(proj(PLUS), proj(KET1))
        assert_allclose(rho.matrix, want, atol=1e-15)


class TestStateFiles:
    def test_round_trip_bit_exact(self, rng, tmp_path):
        for dims in ([2, 2], [2, 2, 2], [2, 3]):
            rho = random_density(dims, rng)
            path = tmp_path / "s.json"
            save_state(rho, path)
            back = load_state(path)
            assert back.dims == rho.dims
            assert np.array_equal(back.matrix, rho.matrix)

    def test_format(self):
        obj = json.loads(state_to_json(make_paper_family(0.5)))
        assert obj["dims"] == [2, 2]
        assert obj["matrix"][1][2] == [0.25, 0.0]
        assert len(obj["matrix"]) == 4 and all(len(r) == 4 for r in obj["matrix"])

    def test_full_precision(self, rng):
        rho = random_strictly_classical([2, 2], rng)
        assert np.array_equal(state_from_dict(json.loads(state_to_json(rho))).matrix, rho.matrix)

    @pytest.mark.parametrize("obj", [{}, {"dims": [2], "matrix": [[1, 0], [0, 0]]},
                                     {"dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}])
    def test_malformed(self, obj):
        with pytest.raises(InvalidStateError):
            state_from_dict(obj)

    def test_not_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        with pytest.raises(InvalidStateError):
            load_state(p)
