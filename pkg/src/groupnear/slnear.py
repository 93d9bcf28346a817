"""Nearest matrices of determinant one, by eliminating the multiplier chain.

For invertible real u the critical points of x -> |u - x|^2 on the
determinant-one locus satisfy x^t(u - x) = c I for a scalar c.  Writing
s = x^t x and diagonalising u^t u with eigenvalues mu_i, each eigenvalue
lambda_i of s solves the quadratic

    f_i = c^2 + (2c - mu_i) lambda_i + lambda_i^2 = 0

subject to lambda_1 ... lambda_n = 1.  Eliminating the lambda_i leaves a
univariate polynomial in c of degree n 2^n whose real roots index every
real critical point; x is then recovered as u^{-t}(c I + s).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, InputError, UnsupportedError
from .matcore import as_square, det, frobenius_norm, solve, sym_eig
from .polyres import (
    chain_value,
    distinct_root_count,
    kernel_lift,
    poly_roots,
    resultant_chain,
)

# Exact pipeline stops at degree 64; degree 160 works but its
# interpolation conditioning is not acceptance-grade.
SL_MAX_N = 4
SL_EXPERIMENTAL_MAX_N = 5

_BRANCH_TOL = 1e-5
_BRANCH_MARGIN = 10.0
_REAL_IM_TOL = 1e-8


@dataclass(frozen=True)
class SLSolution:
    """One real critical point of the squared distance on SL^pm."""

    c: float
    lambdas: tuple[float, ...]
    s: np.ndarray
    x: np.ndarray
    distance_sq: float

    @property
    def det_sign(self) -> int:
        # Sign read off the LU factorisation; |det x| = 1 up to roundoff.
        return 1 if det(self.x) > 0.0 else -1


def _real_filter(roots: np.ndarray) -> list[float]:
    out = []
    for z in roots:
        if abs(z.imag) < _REAL_IM_TOL * (1.0 + abs(z.real)):
            out.append(float(z.real))
    return out


def _sharpen_root(mu: np.ndarray, c: float) -> float:
    """Newton-correct a root of the interpolated eliminant against the exact
    determinant collapse.  Aberth roots of the degree-n*2^n fit carry only
    about 1e-5 accuracy at n >= 3, which is too loose for branch selection.
    """
    scale = 1.0 + abs(c)
    for _ in range(8):
        h = 1e-7 * scale
        val = chain_value(mu, c)
        deriv = (chain_value(mu, c + h) - chain_value(mu, c - h)) / (2.0 * h)
        if deriv == 0.0:
            break
        step = val / deriv
        c -= step
        if abs(step) < 1e-13 * scale:
            break
    return c


def _lambda_candidates(mu: np.ndarray, c: float) -> list[tuple[float, float]] | None:
    """Both quadratic roots of f_i per eigenvalue, or None when complex."""
    pairs = []
    for m in mu:
        disc = m * (m - 4.0 * c)
        if disc < -1e-9 * (1.0 + m * m):
            return None
        root = math.sqrt(max(disc, 0.0))
        lo = ((m - 2.0 * c) - root) / 2.0
        hi = ((m - 2.0 * c) + root) / 2.0
        pairs.append((lo, hi))
    return pairs


def _select_branch(pairs: list[tuple[float, float]]) -> np.ndarray:
    """Resolve the 2^n sign ambiguity by the product constraint."""
    best = None
    best_err = math.inf
    runner = math.inf
    for choice in itertools.product((0, 1), repeat=len(pairs)):
        lam = [pairs[i][k] for i, k in enumerate(choice)]
        prod = 1.0
        for v in lam:
            prod *= v
        err = abs(prod - 1.0)
        if err < best_err:
            runner = best_err
            best_err = err
            best = lam
        elif err < runner:
            runner = err
    if best_err >= _BRANCH_TOL:
        raise DegeneracyError(
            "no branch combination satisfies the unit-product constraint "
            f"(best residual {best_err:.3e})"
        )
    if runner <= _BRANCH_MARGIN * best_err:
        raise DegeneracyError(
            "ambiguous branch selection: runner-up product residual "
            f"{runner:.3e} within 10x of best {best_err:.3e}"
        )
    return np.asarray(best, dtype=float)


def _newton_polish(mu: np.ndarray, c: float, lam: np.ndarray) -> tuple[float, np.ndarray]:
    """Sharpen (c, lambda) on {f_i = 0, prod lambda = 1}."""
    n = mu.size
    z = np.concatenate(([c], lam))
    scale = 1.0 + float(np.max(mu))
    for _ in range(25):
        cc, ll = z[0], z[1:]
        f = cc * cc + (2.0 * cc - mu) * ll + ll * ll
        prod = float(np.prod(ll))
        res = np.concatenate((f, [prod - 1.0]))
        if float(np.max(np.abs(res))) < 1e-14 * scale:
            break
        jac = np.zeros((n + 1, n + 1))
        jac[:n, 0] = 2.0 * cc + 2.0 * ll
        jac[np.arange(n), np.arange(n) + 1] = 2.0 * cc - mu + 2.0 * ll
        jac[n, 1:] = prod / ll
        try:
            step = solve(jac, res)
        except DegeneracyError:
            break
        z = z - step
        if float(np.max(np.abs(step))) < 1e-15 * scale:
            break
    return float(z[0]), z[1:]


def _kernel_cross_check(mu: np.ndarray, c: float, lam: np.ndarray) -> None:
    ref = kernel_lift(mu, c)
    err = float(np.max(np.abs(ref - lam) / (1.0 + np.abs(lam))))
    if err > 1e-5:
        raise DegeneracyError(
            f"kernel lift disagrees with quadratic lift at c={c:.6g} "
            f"(relative gap {err:.3e})"
        )


def _check_n(n: int, experimental: bool) -> None:
    limit = SL_EXPERIMENTAL_MAX_N if experimental else SL_MAX_N
    if n > limit:
        raise UnsupportedError(
            f"determinant-one pipeline supports n <= {limit}"
            + ("" if experimental else " (n = 5 behind experimental=True)")
        )


def sl_critical_points(
    u, *, experimental: bool = False, cross_check: bool = False
) -> list[SLSolution]:
    """All real critical points of the squared distance from u to SL^pm.

    Diagonalises u^t u, eliminates the lambda chain down to a single
    polynomial in c, and lifts each real root back to a matrix.  With
    cross_check the quadratic-formula lift is verified against the
    kernel of the partial elimination matrices.
    """
    u = as_square(u, "u")
    n = u.shape[0]
    _check_n(n, experimental)
    eig = sym_eig(u.T @ u)
    mu = eig.values
    if float(mu[-1]) <= 0.0:
        raise DegeneracyError("u^t u must be positive definite")
    chain = resultant_chain(mu)
    roots = poly_roots(chain)
    ident = np.eye(n)
    sols = []
    for c in _real_filter(roots):
        c = _sharpen_root(mu, c)
        pairs = _lambda_candidates(mu, c)
        if pairs is None:
            continue
        lam = _select_branch(pairs)
        c, lam = _newton_polish(mu, c, lam)
        if float(np.min(lam)) <= 0.0:
            raise DegeneracyError(
                f"non-positive lambda at real root c={c:.6g}"
            )
        if cross_check:
            _kernel_cross_check(mu, c, lam)
        s = eig.q @ np.diag(lam) @ eig.q.T
        x = solve(u.T, c * ident + s)
        sols.append(
            SLSolution(
                c=c,
                lambdas=tuple(float(v) for v in lam),
                s=s,
                x=x,
                distance_sq=float(frobenius_norm(u - x) ** 2),
            )
        )
    if not sols:
        raise DegeneracyError("no real critical point recovered")
    sols.sort(key=lambda sol: (sol.distance_sq, sol.c))
    return sols


def nearest_sl(u, component: str = "pm", *, experimental: bool = False) -> SLSolution:
    """Minimum-distance solution over SL^pm ("pm") or det = +1 only ("plus")."""
    if component not in ("pm", "plus"):
        raise InputError(f"component must be 'pm' or 'plus', got {component!r}")
    sols = sl_critical_points(u, experimental=experimental)
    if component == "plus":
        sols = [sol for sol in sols if sol.det_sign == 1]
        if not sols:
            raise DegeneracyError("no det +1 critical point recovered")
    return sols[0]


def sl_ed_degree(n: int, seed: int) -> int:
    """Distinct complex critical multipliers for a random u; expect n 2^n."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("n must be a positive integer")
    _check_n(n, experimental=False)
    from .matcore import random_general

    u = random_general(n, seed)
    mu = sym_eig(u.T @ u).values
    roots = poly_roots(resultant_chain(mu))
    return distinct_root_count(roots, tol=1e-7)


def smallest_c_check(u, *, experimental: bool = False) -> dict:
    """Record whether the smallest-|c| real root is the distance minimizer.

    Evidence gathering only: the coincidence is conjectural, so the result
    carries the observed values rather than an assertion.
    """
    sols = sl_critical_points(u, experimental=experimental)
    by_abs = min(sols, key=lambda sol: abs(sol.c))
    minimizer = sols[0]
    holds = abs(by_abs.c - minimizer.c) <= 1e-7 * (1.0 + abs(minimizer.c))
    return {
        "holds": bool(holds),
        "c_min_abs": abs(by_abs.c),
        "c_of_minimizer": minimizer.c,
    }
