"""Critical points over the determinant-one groups via elimination."""

import numpy as np
import pytest

from groupnear.errors import DegeneracyError, InputError, UnsupportedError
from groupnear.matcore import det, frobenius_norm, random_general, sym_eig
from groupnear.slnear import (
    SLSolution,
    nearest_sl,
    sl_critical_points,
    sl_ed_degree,
    smallest_c_check,
)


def _check_solution(u, sol, tol=1e-7):
    """Every reported solution must satisfy the full critical system."""
    n = u.shape[0]
    mu = np.sort(sym_eig(u.T @ u).values)[::-1]
    lam = np.asarray(sol.lambdas)
    c = sol.c
    for m_i, l_i in zip(mu, lam):
        assert abs(c * c + (2 * c - m_i) * l_i + l_i * l_i) < tol * (1.0 + m_i)
        assert l_i > 0.0
    assert abs(np.prod(lam) - 1.0) < tol
    assert abs(abs(det(sol.x)) - 1.0) < tol
    gram = sol.x.T @ (u - sol.x)
    assert frobenius_norm(gram - c * np.eye(n)) < tol * (1.0 + frobenius_norm(u))


class TestOneByOne:
    def test_two_points_closed_form(self):
        # x = 1: c = 3 - 1 = 2; x = -1: c = -(3 + 1) = -4.
        sols = sl_critical_points(np.array([[3.0]]))
        assert len(sols) == 2
        assert sols[0].c == pytest.approx(2.0)
        assert sols[0].x[0, 0] == pytest.approx(1.0)
        assert sols[0].distance_sq == pytest.approx(4.0)
        assert sols[1].c == pytest.approx(-4.0)
        assert sols[1].x[0, 0] == pytest.approx(-1.0)
        assert sols[1].distance_sq == pytest.approx(16.0)


class TestDiagonalTwoByTwo:
    def test_input_on_group_is_fixed(self):
        u = np.diag([2.0, 0.5])  # det 1 already
        best = nearest_sl(u, "pm")
        assert best.distance_sq < 1e-15
        assert abs(best.c) < 1e-10
        assert np.allclose(best.x, u, atol=1e-8)

    def test_four_real_points(self):
        sols = sl_critical_points(np.diag([3.0, 1.0]))
        assert len(sols) == 4
        assert [s.det_sign for s in sols] == [1, -1, -1, 1]
        want_c = [0.225072109458952, -0.420848233373475, -1.81521974412631, -2.93849109202397]
        want_d = [0.438742638783603, 1.75793072577526, 13.2420692742247, 19.4960947029766]
        for s, c, d in zip(sols, want_c, want_d):
            assert s.c == pytest.approx(c, abs=1e-9)
            assert s.distance_sq == pytest.approx(d, abs=1e-9)

    def test_negative_determinant_side(self):
        u = np.diag([-3.0, 1.0])
        pm = nearest_sl(u, "pm")
        plus = nearest_sl(u, "plus")
        assert pm.det_sign == -1
        assert pm.distance_sq == pytest.approx(0.438742638783603, abs=1e-9)
        assert plus.det_sign == 1
        assert plus.distance_sq == pytest.approx(1.75793072577526, abs=1e-9)
        assert plus.distance_sq > pm.distance_sq


class TestSolutionSystem:
    @pytest.mark.parametrize("n,seed", [(2, 0), (2, 1), (3, 0), (3, 1)])
    def test_full_system_satisfied(self, n, seed):
        u = random_general(n, seed)
        sols = sl_critical_points(u)
        assert sols
        for sol in sols:
            _check_solution(u, sol)

    def test_sorted_by_distance(self):
        sols = sl_critical_points(random_general(3, 2))
        dists = [s.distance_sq for s in sols]
        assert dists == sorted(dists)

    def test_cross_check_path_agrees(self):
        u = random_general(2, 3)
        plain = sl_critical_points(u)
        checked = sl_critical_points(u, cross_check=True)
        assert len(plain) == len(checked)
        for a, b in zip(plain, checked):
            assert a.c == pytest.approx(b.c, abs=1e-12)

    def test_four_by_four(self):
        u = random_general(4, 0)
        sols = sl_critical_points(u)
        assert sols
        for sol in sols:
            _check_solution(u, sol)

    def test_too_large_rejected(self):
        with pytest.raises(UnsupportedError):
            sl_critical_points(np.eye(6))

    def test_five_needs_opt_in(self):
        with pytest.raises(UnsupportedError):
            sl_critical_points(np.eye(5))

    def test_singular_input_rejected(self):
        u = np.array([[1.0, 2.0], [2.0, 4.0]])
        with pytest.raises((DegeneracyError, InputError)):
            sl_critical_points(u)


class TestNearestSL:
    def test_component_names(self):
        u = random_general(2, 4)
        with pytest.raises(InputError):
            nearest_sl(u, "weird")

    def test_plus_component_determinant(self):
        for seed in range(5):
            best = nearest_sl(random_general(2, seed), "plus")
            assert best.det_sign == 1

    def test_pm_never_worse_than_plus(self):
        for seed in range(5):
            u = random_general(3, 30 + seed)
            pm = nearest_sl(u, "pm")
            plus = nearest_sl(u, "plus")
            assert pm.distance_sq <= plus.distance_sq + 1e-12


class TestCounting:
    @pytest.mark.parametrize("n,expected", [(1, 2), (2, 8)])
    def test_distinct_multiplier_count(self, n, expected):
        assert sl_ed_degree(n, 0) == expected

    def test_rejects_bad_size(self):
        with pytest.raises(InputError):
            sl_ed_degree(0, 1)


class TestSmallestC:
    def test_returns_fields_and_holds(self):
        out = smallest_c_check(random_general(2, 7))
        assert set(out) == {"holds", "c_min_abs", "c_of_minimizer"}
        assert out["holds"] in (True, False)
        assert out["c_min_abs"] <= abs(out["c_of_minimizer"]) + 1e-12
