"""Dense matrix kernel: Frobenius geometry, eigensolvers, LU, seeded inputs.

Everything downstream works at desk scale (n <= 16 or so), so the solvers
here favour determinism and accuracy over asymptotics: a cyclic Jacobi
sweep for symmetric eigenproblems, a real 2m x 2m embedding for Hermitian
ones, and plain partially-pivoted LU for determinants and inverses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DegeneracyError,
    InputError,
    SingularityError,
)

# Relative symmetry slack accepted by sym_eig / herm_eig.
SYMMETRY_TOL = 1e-12
# Off-diagonal mass (relative to ||s||_F) at which Jacobi stops.
JACOBI_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 64

__all__ = [
    "EigenDecomposition",
    "as_square",
    "frobenius_inner",
    "frobenius_norm",
    "sym_eig",
    "herm_eig",
    "det",
    "inverse",
    "solve",
    "random_general",
    "matrix_to_json",
    "matrix_from_json",
]


def as_square(a, name: str = "matrix") -> np.ndarray:
    """Validate and return a dense square array with finite entries."""
    arr = np.asarray(a)
    if arr.dtype == object:
        raise InputError(f"{name}: entries must be numeric")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128)
    else:
        arr = arr.astype(np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"{name}: expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise InputError(f"{name}: empty matrix")
    if not np.all(np.isfinite(arr.view(np.float64) if arr.dtype == np.complex128 else arr)):
        raise InputError(f"{name}: entries must be finite")
    return arr


def frobenius_inner(a, b) -> float:
    """Frobenius pairing tr(a^t b) of two real matrices of equal shape."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InputError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.sum(a * b))


def frobenius_norm(a) -> float:
    a = np.asarray(a)
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral factorisation s = q diag(values) q^t.

    q has orthonormal columns; values are sorted descending, ties kept in
    order of first appearance.
    """

    q: np.ndarray
    values: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.q * self.values) @ np.conj(self.q).T


def _check_symmetric(s: np.ndarray, name: str) -> np.ndarray:
    scale = max(1.0, frobenius_norm(s))
    if frobenius_norm(s - np.conj(s).T) > SYMMETRY_TOL * scale:
        raise InputError(f"{name}: matrix is not symmetric/Hermitian to tolerance")
    return 0.5 * (s + np.conj(s).T)


def sym_eig(s) -> EigenDecomposition:
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Sweeps rotate away every off-diagonal pair per cycle and stop once the
    off-diagonal Frobenius mass drops below JACOBI_TOL * ||s||_F.  For the
    small dense matrices used here this delivers near machine-precision
    reconstruction.
    """
    a = as_square(s, "sym_eig")
    if np.iscomplexobj(a):
        raise InputError("sym_eig: real input required, use herm_eig")
    a = _check_symmetric(a, "sym_eig")
    n = a.shape[0]
    v = np.eye(n)
    norm = frobenius_norm(a)
    if norm == 0.0:
        return EigenDecomposition(q=v, values=np.zeros(n))

    offmask = ~np.eye(n, dtype=bool)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = math.sqrt(float(np.sum(a[offmask] ** 2)))
        if off <= JACOBI_TOL * norm:
            break
        for p in range(n - 1):
            for q_ in range(p + 1, n):
                apq = a[p, q_]
                if abs(apq) <= 1e-300:
                    continue
                # Classic two-sided rotation choosing the smaller angle.
                theta = 0.5 * (a[q_, q_] - a[p, p]) / apq
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                sn = t * c
                rp = a[p, :].copy()
                rq = a[q_, :].copy()
                a[p, :] = c * rp - sn * rq
                a[q_, :] = sn * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q_].copy()
                a[:, p] = c * cp - sn * cq
                a[:, q_] = sn * cp + c * cq
                a[p, q_] = 0.0
                a[q_, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q_].copy()
                v[:, p] = c * vp - sn * vq
                v[:, q_] = sn * vp + c * vq
    else:
        raise ConvergenceError("sym_eig: Jacobi sweeps did not converge")

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return EigenDecomposition(q=v[:, order], values=values[order])


def herm_eig(h) -> EigenDecomposition:
    """Eigendecomposition of a complex Hermitian matrix.

    Runs real Jacobi on the standard embedding [[re, -im], [im, re]], whose
    spectrum doubles that of h, then folds eigenvector pairs (x; y) back to
    complex vectors x + iy.  Avoids a second eigensolver implementation.
    """
    hm = as_square(h, "herm_eig")
    hm = _check_symmetric(hm.astype(np.complex128), "herm_eig")
    m = hm.shape[0]
    re, im = hm.real, hm.imag
    emb = np.block([[re, -im], [im, re]])
    dec = sym_eig(emb)

    # Doubled eigenvalues come out adjacent after the descending sort; keep
    # one representative per pair.
    values = dec.values[0::2]
    vecs = np.empty((m, m), dtype=np.complex128)
    for k in range(m):
        w = dec.q[:, 2 * k]
        vecs[:, k] = w[:m] + 1j * w[m:]

    # Within a numerically repeated eigenvalue the folded vectors need not be
    # unitary yet; orthogonalise inside each equal-value group only.
    scale = max(1.0, abs(values[0]) if m else 1.0)
    start = 0
    for k in range(1, m + 1):
        if k == m or abs(values[k] - values[start]) > 1e-9 * scale:
            block = vecs[:, start:k]
            for j in range(block.shape[1]):
                for i in range(j):
                    block[:, j] -= (np.vdot(block[:, i], block[:, j])) * block[:, i]
                nrm = frobenius_norm(block[:, j])
                if nrm < 1e-12:
                    raise DegeneracyError("herm_eig: defective eigenvector block")
                block[:, j] /= nrm
            vecs[:, start:k] = block
            start = k
    return EigenDecomposition(q=vecs, values=values)


def _lu_decompose(a: np.ndarray):
    """In-place Doolittle LU with partial pivoting.

    Returns (lu, perm, parity) where lu packs both factors and parity is the
    sign of the row permutation.  No singularity check here; callers inspect
    the pivots themselves.
    """
    lu = np.array(a, dtype=a.dtype)
    n = lu.shape[0]
    perm = np.arange(n)
    parity = 1.0
    for k in range(n):
        piv = k + int(np.argmax(np.abs(lu[k:, k])))
        if piv != k:
            lu[[k, piv], :] = lu[[piv, k], :]
            perm[[k, piv]] = perm[[piv, k]]
            parity = -parity
        pivot = lu[k, k]
        if pivot == 0:
            continue
        lu[k + 1 :, k] /= pivot
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, perm, parity


def det_mantissa_exp(a) -> tuple[float, int]:
    """Determinant as (mantissa, exponent) with value = mantissa * 2**exponent.

    Keeps huge Sylvester determinants representable without intermediate
    overflow; mantissa stays in [1, 2) up to sign (0 for singular input).
    """
    arr = as_square(a, "det")
    lu, _, parity = _lu_decompose(arr)
    mant = parity
    expo = 0
    for k in range(lu.shape[0]):
        piv = lu[k, k]
        if piv == 0.0:
            return 0.0, 0
        m, e = math.frexp(abs(piv))
        mant *= math.copysign(m, piv)
        expo += e
        m2, e2 = math.frexp(abs(mant))
        mant = math.copysign(m2, mant)
        expo += e2
    return mant, expo


def det(a) -> float:
    """Determinant via partially pivoted LU."""
    arr = as_square(a, "det")
    if np.iscomplexobj(arr):
        lu, _, parity = _lu_decompose(arr)
        return complex(parity * np.prod(np.diag(lu)))
    mant, expo = det_mantissa_exp(arr)
    return math.ldexp(mant, expo)


def solve(a, b) -> np.ndarray:
    """Solve a x = b by LU with partial pivoting."""
    arr = as_square(a, "solve")
    rhs = np.asarray(b, dtype=arr.dtype)
    if rhs.shape[0] != arr.shape[0]:
        raise InputError("solve: shape mismatch")
    lu, perm, _ = _lu_decompose(arr)
    scale = float(np.max(np.abs(arr))) if arr.size else 0.0
    pivots = np.abs(np.diag(lu))
    if scale == 0.0 or np.min(pivots) < 1e-12 * max(1.0, scale):
        raise SingularityError("solve: matrix is singular to working precision")
    y = rhs[perm].astype(arr.dtype, copy=True)
    n = arr.shape[0]
    for k in range(1, n):
        y[k] -= lu[k, :k] @ y[:k]
    for k in range(n - 1, -1, -1):
        y[k] = (y[k] - lu[k, k + 1 :] @ y[k + 1 :]) / lu[k, k]
    return y


def inverse(a) -> np.ndarray:
    """Matrix inverse via LU; raises SingularityError on tiny pivots."""
    arr = as_square(a, "inverse")
    return solve(arr, np.eye(arr.shape[0], dtype=arr.dtype))


def eigenvalue_gaps_ok(values: np.ndarray, rel_gap: float = 1e-6) -> bool:
    """True when consecutive sorted eigenvalues are separated by rel_gap
    relative to max(1, largest magnitude)."""
    vals = np.sort(np.asarray(values, dtype=float))[::-1]
    scale = max(1.0, float(np.max(np.abs(vals))) if vals.size else 1.0)
    return bool(np.all(np.diff(vals[::-1]) >= rel_gap * scale)) if vals.size > 1 else True


def random_general(n: int, seed: int, complex_entries: bool = False) -> np.ndarray:
    """Seeded generic test matrix with i.i.d. uniform [-1, 1] entries.

    Redraws until the matrix is invertible and the Gram matrix u^t u has
    well-separated eigenvalues, so downstream sign enumerations and branch
    selections never sit on a degeneracy.  Gives up after 100 attempts.
    """
    if n < 1:
        raise InputError("random_general: n must be positive")
    rng = np.random.default_rng(seed)
    for _ in range(100):
        if complex_entries:
            u = rng.uniform(-1.0, 1.0, (n, n)) + 1j * rng.uniform(-1.0, 1.0, (n, n))
            gram = np.conj(u).T @ u
            vals = herm_eig(gram).values
        else:
            u = rng.uniform(-1.0, 1.0, (n, n))
            vals = sym_eig(u.T @ u).values
        scale = max(1.0, float(vals[0]))
        if float(vals[-1]) < 1e-8 * scale:
            continue
        if n > 1 and float(np.min(-np.diff(vals))) < 1e-6 * scale:
            continue
        return u
    raise DegeneracyError(f"random_general: no well-conditioned draw for n={n}, seed={seed}")


def matrix_to_json(a) -> dict:
    """Wire format: {"n": ..., "data": ...} real or {"n": ..., "re": ..., "im": ...}."""
    arr = as_square(a, "matrix")
    if np.iscomplexobj(arr):
        return {
            "n": int(arr.shape[0]),
            "re": [[float(x) for x in row] for row in arr.real],
            "im": [[float(x) for x in row] for row in arr.imag],
        }
    return {"n": int(arr.shape[0]), "data": [[float(x) for x in row] for row in arr]}


def _grid(obj, n: int, key: str) -> np.ndarray:
    grid = obj[key]
    if (
        not isinstance(grid, list)
        or len(grid) != n
        or any(not isinstance(row, list) or len(row) != n for row in grid)
    ):
        raise InputError(f"matrix JSON: '{key}' must be an {n} x {n} array")
    try:
        out = np.array(grid, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix JSON: non-numeric entry in '{key}'") from exc
    if not np.all(np.isfinite(out)):
        raise InputError(f"matrix JSON: entries in '{key}' must be finite")
    return out


def matrix_from_json(obj) -> np.ndarray:
    """Parse the matrix wire format, validating shape and finiteness."""
    if not isinstance(obj, dict):
        raise InputError("matrix JSON: expected an object")
    if "n" not in obj or not isinstance(obj["n"], int) or isinstance(obj["n"], bool):
        raise InputError("matrix JSON: missing integer field 'n'")
    n = obj["n"]
    if n < 1:
        raise InputError("matrix JSON: 'n' must be positive")
    if "data" in obj:
        return _grid(obj, n, "data")
    if "re" in obj and "im" in obj:
        return _grid(obj, n, "re") + 1j * _grid(obj, n, "im")
    raise InputError("matrix JSON: expected 'data' or 're'/'im' fields")
