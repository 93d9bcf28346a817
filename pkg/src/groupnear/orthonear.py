"""Closed-form nearest matrices and full critical-point enumerations for the
orthogonal, special orthogonal, and unitary groups.

Every critical point of the squared Frobenius distance from a data matrix u
to one of these groups factors through a spectral decomposition of the Gram
matrix u^t u: each of the 2^n sign choices on the square roots of its
eigenvalues yields one critical point, and the all-positive choice is the
global minimizer.  Distances for complex input are reported in the real
metric (twice the complex squared norm).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .critsearch import (
    CriticalPoint,
    GroupSpec,
    critical_point_from,
    membership_violation,
)
from .errors import DegeneracyError, InputError, SingularityError
from .matcore import as_square, det, frobenius_norm, herm_eig, inverse, sym_eig

# Minimum relative eigenvalue gap of the Gram matrix; below this the sign
# enumeration is ill-posed and we refuse rather than perturb.
GAP_TOL = 1e-8

__all__ = [
    "CriticalPoint",
    "GPerpDecomposition",
    "nearest_orthogonal",
    "enumerate_orthogonal_critical",
    "nearest_special_orthogonal",
    "nearest_unitary",
    "enumerate_unitary_critical",
    "gperp_decompose",
]


def _gram_spectrum(u: np.ndarray):
    """Spectral data of the Gram matrix, rejecting degenerate or singular u."""
    if np.iscomplexobj(u):
        dec = herm_eig(np.conj(u).T @ u)
    else:
        dec = sym_eig(u.T @ u)
    vals = dec.values
    scale = max(1.0, float(vals[0]))
    if float(vals[-1]) <= 0.0 or float(vals[-1]) < 1e-14 * scale:
        raise SingularityError("data matrix is singular to working precision")
    if vals.size > 1 and float(np.min(-np.diff(vals))) < GAP_TOL * scale:
        raise DegeneracyError("Gram matrix spectrum is too clustered to enumerate")
    return dec.q, vals


def _signed_point(u, q, vals, signs) -> np.ndarray:
    # s = q diag(eps * sqrt(lambda)) q^*, x = u s^{-1}
    roots = np.asarray(signs, dtype=float) * np.sqrt(vals)
    s_inv = (q / roots) @ np.conj(q).T
    return u @ s_inv


def nearest_orthogonal(u) -> CriticalPoint:
    """Closest orthogonal matrix to u: the all-positive-root critical point."""
    u = as_square(u, "u")
    if np.iscomplexobj(u):
        raise InputError("nearest_orthogonal: real input required")
    q, vals = _gram_spectrum(u)
    x = _signed_point(u, q, vals, np.ones(vals.size))
    return critical_point_from(x, u, GroupSpec("orthogonal", u.shape[0]))


def enumerate_orthogonal_critical(u) -> list[CriticalPoint]:
    """All 2^n critical points over the orthogonal group, one per sign vector,
    in lexicographic sign order (+1 before -1)."""
    u = as_square(u, "u")
    if np.iscomplexobj(u):
        raise InputError("enumerate_orthogonal_critical: real input required")
    q, vals = _gram_spectrum(u)
    g = GroupSpec("orthogonal", u.shape[0])
    out = []
    for signs in itertools.product((1.0, -1.0), repeat=vals.size):
        x = _signed_point(u, q, vals, signs)
        out.append(critical_point_from(x, u, g))
    return out


def nearest_special_orthogonal(u) -> CriticalPoint:
    """Closest rotation to u.

    For det(u) > 0 this is the plain polar factor; otherwise the sign of the
    smallest square root flips, which is the cheapest determinant correction.
    """
    u = as_square(u, "u")
    if np.iscomplexobj(u):
        raise InputError("nearest_special_orthogonal: real input required")
    q, vals = _gram_spectrum(u)
    signs = np.ones(vals.size)
    # The polar factor inherits the determinant sign of u.
    if det(u) < 0.0:
        signs[-1] = -1.0  # eigenvalues sorted descending, so last is smallest
    x = _signed_point(u, q, vals, signs)
    point = critical_point_from(x, u, GroupSpec("special_orthogonal", u.shape[0]))
    if point.det_sign != 1:
        raise DegeneracyError("special orthogonal branch selection failed")
    return point


def nearest_unitary(u) -> CriticalPoint:
    """Closest unitary matrix to a complex square matrix."""
    u = as_square(u, "u").astype(np.complex128)
    q, vals = _gram_spectrum(u)
    x = _signed_point(u, q, vals, np.ones(vals.size))
    return critical_point_from(x, u, GroupSpec("unitary_embedded", 2 * u.shape[0]))


def enumerate_unitary_critical(u) -> list[CriticalPoint]:
    """All 2^m unitary critical points, lexicographic sign order."""
    u = as_square(u, "u").astype(np.complex128)
    q, vals = _gram_spectrum(u)
    g = GroupSpec("unitary_embedded", 2 * u.shape[0])
    out = []
    for signs in itertools.product((1.0, -1.0), repeat=vals.size):
        x = _signed_point(u, q, vals, signs)
        out.append(critical_point_from(x, u, g))
    return out


@dataclass(frozen=True)
class GPerpDecomposition:
    """The factor s = x^{-1} u at a group element x.

    For inner-product-preserving groups s lands in the orthogonal complement
    of the Lie algebra (symmetric, resp. Hermitian); trace is reported in the
    real metric, so complex traces are doubled.
    """

    s: np.ndarray
    in_gperp: bool
    trace: float


def gperp_decompose(u, x, group: GroupSpec) -> GPerpDecomposition:
    """Split u = x s at a group element x and test s against g-perp."""
    u = as_square(u, "u")
    x = as_square(x, "x")
    if u.shape != x.shape:
        raise InputError("gperp_decompose: size mismatch")
    if group.kind not in ("orthogonal", "special_orthogonal", "unitary_embedded"):
        raise InputError("gperp_decompose: inner-product-preserving groups only")
    complex_mode = np.iscomplexobj(u) or np.iscomplexobj(x)
    if complex_mode and group.kind != "unitary_embedded":
        raise InputError("gperp_decompose: complex input needs the unitary group")
    check_x = x
    check_g = group
    if complex_mode:
        from .critsearch import embed_complex

        check_x = embed_complex(x)
        check_g = GroupSpec("unitary_embedded", 2 * x.shape[0])
    if membership_violation(check_x, check_g) > 1e-7 * (1.0 + frobenius_norm(x)):
        raise InputError("gperp_decompose: x is not a group element")
    s = inverse(x) @ u.astype(x.dtype)
    dev = frobenius_norm(s - np.conj(s).T)
    in_perp = dev <= 1e-7 * (1.0 + frobenius_norm(s))
    tr = np.trace(s)
    trace = 2.0 * float(np.real(tr)) if complex_mode else float(np.real(tr))
    return GPerpDecomposition(s=s, in_gperp=bool(in_perp), trace=trace)
