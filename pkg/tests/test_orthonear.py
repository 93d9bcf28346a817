"""Closed-form nearest points and censuses for norm-preserving groups."""

import numpy as np
import pytest

from groupnear.critsearch import GroupSpec, membership_violation
from groupnear.errors import DegeneracyError, InputError
from groupnear.matcore import det, frobenius_norm, random_general
from groupnear.orthonear import (
    enumerate_orthogonal_critical,
    enumerate_unitary_critical,
    gperp_decompose,
    nearest_orthogonal,
    nearest_special_orthogonal,
    nearest_unitary,
)


def _rotation(t):
    return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])


def _reflection(t):
    return np.array([[np.cos(t), np.sin(t)], [np.sin(t), -np.cos(t)]])


def _brute_min_o2(u, grid=20000):
    """Scan both components of the 2x2 orthogonal group on an angle grid."""
    best = np.inf
    for t in np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False):
        for x in (_rotation(t), _reflection(t)):
            best = min(best, float(np.sum((u - x) ** 2)))
    return best


def _brute_min_so2(u, grid=20000):
    best = np.inf
    for t in np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False):
        best = min(best, float(np.sum((u - _rotation(t)) ** 2)))
    return best


class TestNearestOrthogonal:
    def test_antidiagonal_example(self):
        u = np.array([[0.0, 2.0], [1.0, 0.0]])
        point = nearest_orthogonal(u)
        assert np.allclose(point.x, [[0.0, 1.0], [1.0, 0.0]], atol=1e-12)
        assert point.distance_sq == pytest.approx(1.0)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_angle_scan(self, seed):
        u = random_general(2, seed)
        ours = nearest_orthogonal(u).distance_sq
        brute = _brute_min_o2(u)
        # The grid overshoots the true minimum by O(step^2).
        assert ours <= brute + 1e-6
        assert ours == pytest.approx(brute, abs=1e-6)

    def test_exactly_orthogonal_input_refused(self):
        # Gram matrix of a rotation is the identity: repeated eigenvalues,
        # so the solver refuses rather than perturbing.
        with pytest.raises(DegeneracyError):
            nearest_orthogonal(_rotation(0.7))

    def test_near_orthogonal_input(self):
        u = _rotation(0.7) @ np.diag([1.001, 0.999])
        point = nearest_orthogonal(u)
        assert point.distance_sq == pytest.approx(2e-6, rel=1e-2)

    def test_complex_input_rejected(self):
        with pytest.raises(InputError):
            nearest_orthogonal(np.eye(2, dtype=complex))


class TestEnumerateOrthogonal:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_count_and_membership(self, n):
        u = random_general(n, 40 + n)
        points = enumerate_orthogonal_critical(u)
        assert len(points) == 2**n
        g = GroupSpec("orthogonal", n)
        for p in points:
            assert membership_violation(p.x, g) < 1e-9
            assert p.residual < 1e-9

    def test_half_have_positive_determinant(self):
        points = enumerate_orthogonal_critical(random_general(3, 44))
        assert sum(1 for p in points if p.det_sign == 1) == 4

    def test_nearest_is_the_minimum(self):
        u = random_general(3, 45)
        best = nearest_orthogonal(u).distance_sq
        dists = [p.distance_sq for p in enumerate_orthogonal_critical(u)]
        assert best == pytest.approx(min(dists), abs=1e-12)

    def test_points_are_distinct(self):
        points = enumerate_orthogonal_critical(random_general(2, 46))
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                assert frobenius_norm(points[i].x - points[j].x) > 1e-6

    def test_repeated_singular_values_rejected(self):
        with pytest.raises(DegeneracyError):
            enumerate_orthogonal_critical(2.0 * np.eye(2))


class TestNearestSpecialOrthogonal:
    @pytest.mark.parametrize("seed", range(6))
    def test_matches_rotation_scan(self, seed):
        u = random_general(2, 50 + seed)
        point = nearest_special_orthogonal(u)
        assert point.det_sign == 1
        assert point.distance_sq == pytest.approx(_brute_min_so2(u), abs=1e-6)

    def test_negative_determinant_input(self):
        # Data on the wrong side of the group: the best rotation is still
        # found and it beats every enumerated rotation.
        u = np.array([[0.0, 2.0], [1.0, 0.0]])  # det = -2
        point = nearest_special_orthogonal(u)
        assert point.det_sign == 1
        rotations = [p for p in enumerate_orthogonal_critical(u) if p.det_sign == 1]
        assert point.distance_sq <= min(p.distance_sq for p in rotations) + 1e-12

    def test_beats_no_orthogonal_point_when_det_positive(self):
        u = random_general(3, 57)
        if det(u) < 0:
            u = -u
        same = nearest_orthogonal(u)
        special = nearest_special_orthogonal(u)
        assert special.distance_sq == pytest.approx(same.distance_sq, abs=1e-12)


class TestUnitary:
    def test_scalar_closed_form(self):
        z = 3.0 - 4.0j  # |z| = 5
        u = np.array([[z]])
        points = enumerate_unitary_critical(u)
        assert len(points) == 2
        # Phase-aligned point at distance (|z|-1)^2, antipode at (|z|+1)^2,
        # both doubled by the real embedding metric.
        dists = sorted(p.distance_sq for p in points)
        assert dists[0] == pytest.approx(2.0 * 16.0)
        assert dists[1] == pytest.approx(2.0 * 36.0)
        best = nearest_unitary(u)
        assert np.allclose(best.x, [[z / 5.0]], atol=1e-12)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_census_count_and_unitarity(self, m):
        u = random_general(m, 60 + m, complex_entries=True)
        points = enumerate_unitary_critical(u)
        assert len(points) == 2**m
        for p in points:
            gram = np.conj(p.x).T @ p.x
            assert frobenius_norm(gram - np.eye(m)) < 1e-9
            assert p.residual < 1e-9

    def test_nearest_unitary_minimal(self):
        u = random_general(2, 66, complex_entries=True)
        best = nearest_unitary(u).distance_sq
        dists = [p.distance_sq for p in enumerate_unitary_critical(u)]
        assert best == pytest.approx(min(dists), abs=1e-12)


class TestGPerpDecompose:
    def test_orthogonal_point_gives_symmetric_factor(self):
        u = random_general(3, 70)
        point = nearest_orthogonal(u)
        dec = gperp_decompose(u, point.x, GroupSpec("orthogonal", 3))
        assert dec.in_gperp
        assert frobenius_norm(point.x @ dec.s - u) < 1e-10
        assert frobenius_norm(dec.s - dec.s.T) < 1e-10

    def test_generic_group_element_not_in_gperp(self):
        u = random_general(2, 71)
        dec = gperp_decompose(u, np.eye(2), GroupSpec("orthogonal", 2))
        # s = u itself here, and a generic u is not symmetric.
        assert not dec.in_gperp

    def test_non_member_rejected(self):
        u = random_general(2, 72)
        with pytest.raises(InputError):
            gperp_decompose(u, 2.0 * np.eye(2), GroupSpec("orthogonal", 2))

    def test_trace_doubles_for_complex(self):
        z = np.exp(0.3j)
        u = np.array([[2.0 * z]])
        dec = gperp_decompose(u, np.array([[z]]), GroupSpec("unitary_embedded", 2))
        assert dec.trace == pytest.approx(4.0)
