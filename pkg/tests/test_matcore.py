"""Dense linear algebra kernel: eigensolvers, LU routines, matrix JSON."""

import numpy as np
import pytest

from groupnear.errors import InputError, SingularityError
from groupnear.matcore import (
    as_square,
    det,
    det_mantissa_exp,
    frobenius_inner,
    frobenius_norm,
    herm_eig,
    inverse,
    matrix_from_json,
    matrix_to_json,
    random_general,
    solve,
    sym_eig,
)


def _random_symmetric(n, seed):
    a = random_general(n, seed)
    return a + a.T


def _random_hermitian(n, seed):
    a = random_general(n, seed, complex_entries=True)
    return a + np.conj(a).T


class TestSymEig:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
    def test_reconstruction(self, n):
        s = _random_symmetric(n, 100 + n)
        e = sym_eig(s)
        back = (e.q * e.values) @ e.q.T
        assert frobenius_norm(back - s) < 1e-12 * (1.0 + frobenius_norm(s))

    def test_orthonormal_frame(self):
        e = sym_eig(_random_symmetric(6, 7))
        assert frobenius_norm(e.q.T @ e.q - np.eye(6)) < 1e-12

    def test_descending_order(self):
        e = sym_eig(_random_symmetric(6, 8))
        assert all(a >= b for a, b in zip(e.values, e.values[1:]))

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_matches_reference_eigenvalues(self, n):
        s = _random_symmetric(n, 42 + n)
        ours = np.sort(sym_eig(s).values)
        ref = np.sort(np.linalg.eigvalsh(s))
        assert np.max(np.abs(ours - ref)) < 1e-10 * (1.0 + np.max(np.abs(ref)))

    def test_rejects_nonsymmetric(self):
        with pytest.raises(InputError):
            sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestHermEig:
    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_reconstruction(self, m):
        h = _random_hermitian(m, 200 + m)
        e = herm_eig(h)
        back = (e.q * e.values) @ np.conj(e.q).T
        assert frobenius_norm(back - h) < 1e-11 * (1.0 + frobenius_norm(h))

    def test_real_eigenvalues_match_reference(self):
        h = _random_hermitian(3, 9)
        ours = np.sort(herm_eig(h).values)
        ref = np.sort(np.linalg.eigvalsh(h))
        assert np.max(np.abs(ours - ref)) < 1e-10


class TestLU:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_det_matches_reference(self, n):
        a = random_general(n, 300 + n)
        assert det(a) == pytest.approx(np.linalg.det(a), rel=1e-10, abs=1e-13)

    def test_det_of_identity(self):
        assert det(np.eye(4)) == 1.0

    def test_det_mantissa_exp_reassembles(self):
        a = random_general(5, 11)
        mant, expo = det_mantissa_exp(a)
        assert mant * 2.0**expo == pytest.approx(np.linalg.det(a), rel=1e-10)

    def test_det_mantissa_exp_beyond_float_range(self):
        # 2^300 per diagonal entry; the plain determinant would overflow.
        a = np.diag([2.0**300] * 4)
        mant, expo = det_mantissa_exp(a)
        # frexp normal form: mantissa in [0.5, 1)
        assert mant == pytest.approx(0.5)
        assert expo == 1201

    def test_solve_matches_reference(self):
        a = random_general(4, 12)
        b = random_general(4, 13)
        x = solve(a, b)
        assert frobenius_norm(a @ x - b) < 1e-11 * frobenius_norm(b)

    def test_inverse(self):
        a = random_general(3, 14)
        assert frobenius_norm(a @ inverse(a) - np.eye(3)) < 1e-11

    def test_singular_raises(self):
        with pytest.raises(SingularityError):
            inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))


class TestShapeChecks:
    def test_as_square_rejects_rectangular(self):
        with pytest.raises(InputError):
            as_square(np.zeros((2, 3)))

    def test_as_square_rejects_vector(self):
        with pytest.raises(InputError):
            as_square(np.zeros(4))

    def test_frobenius_norm_inner_consistency(self):
        a = random_general(3, 15)
        assert frobenius_norm(a) == pytest.approx(np.sqrt(frobenius_inner(a, a)))


class TestRandomGeneral:
    def test_deterministic(self):
        assert np.array_equal(random_general(3, 5), random_general(3, 5))

    def test_seeds_differ(self):
        assert not np.array_equal(random_general(3, 5), random_general(3, 6))

    def test_complex_entries(self):
        a = random_general(2, 5, complex_entries=True)
        assert np.iscomplexobj(a)


class TestMatrixJson:
    def test_real_round_trip(self):
        a = random_general(3, 21)
        assert np.array_equal(matrix_from_json(matrix_to_json(a)), a)

    def test_complex_round_trip(self):
        a = random_general(2, 22, complex_entries=True)
        assert np.array_equal(matrix_from_json(matrix_to_json(a)), a)

    def test_rejects_ragged(self):
        with pytest.raises(InputError):
            matrix_from_json({"n": 2, "data": [[1.0, 2.0], [3.0]]})

    def test_rejects_size_mismatch(self):
        with pytest.raises(InputError):
            matrix_from_json({"n": 3, "data": [[1.0, 2.0], [3.0, 4.0]]})
