"""Dense complex linear algebra at desk scale.

Everything here works on small square complex matrices.  Eigenvalues go
through the characteristic polynomial (Faddeev-LeVerrier recursion) and
the simultaneous root finder, which caps the supported dimension; the
solver is straight LU with partial pivoting.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import ConvergenceFailure, DimensionTooLarge, SingularMatrix
from .polynomials import Polynomial, roots

__all__ = [
    "EIG_DIM_CAP",
    "as_square",
    "solve",
    "inverse",
    "mat_poly_eval",
    "char_poly",
    "eigenvalues",
    "operator_norm_2",
    "condition_2",
    "nullspace",
]

EIG_DIM_CAP = 16


def as_square(a) -> np.ndarray:
    """Coerce to a square 2-D complex array with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _scale(a: np.ndarray) -> float:
    return max(1.0, float(np.abs(a).max())) if a.size else 1.0


def solve(a, b, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Solve a x = b by LU with partial pivoting.

    b may be a vector or a matrix of stacked right hand sides.  Raises
    SingularMatrix when the best available pivot falls below eq_tol
    relative to the matrix scale.
    """
    a = as_square(a)
    n = a.shape[0]
    b = np.asarray(b, dtype=np.complex128)
    vec = b.ndim == 1
    x = b.reshape(n, -1).copy()
    if x.shape[0] != n:
        raise ValueError("right hand side shape does not match the matrix")
    u = a.copy()
    scale = _scale(a)
    for k in range(n):
        piv = int(np.argmax(np.abs(u[k:, k]))) + k
        if abs(u[piv, k]) <= tol.eq_tol * scale:
            raise SingularMatrix(
                f"pivot {abs(u[piv, k]):.3e} below threshold at column {k}"
            )
        if piv != k:
            u[[k, piv]] = u[[piv, k]]
            x[[k, piv]] = x[[piv, k]]
        f = u[k + 1:, k] / u[k, k]
        u[k + 1:, k:] -= np.outer(f, u[k, k:])
        x[k + 1:] -= np.outer(f, x[k])
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - u[k, k + 1:] @ x[k + 1:]) / u[k, k]
    return x.ravel() if vec else x


def inverse(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    a = as_square(a)
    return solve(a, np.eye(a.shape[0], dtype=np.complex128), tol)


def mat_poly_eval(q, a) -> np.ndarray:
    """Evaluate the polynomial q at the matrix a (Horner scheme)."""
    a = as_square(a)
    c = q.coeffs if isinstance(q, Polynomial) else Polynomial(q).coeffs
    n = a.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    out = c[-1] * eye
    for k in range(len(c) - 2, -1, -1):
        out = out @ a + c[k] * eye
    return out


def char_poly(a) -> Polynomial:
    """Monic characteristic polynomial det(zI - A), ascending coefficients.

    Faddeev-LeVerrier recursion on the matrix prescaled by its largest
    entry; coefficients are rescaled back afterwards.
    """
    a = as_square(a)
    n = a.shape[0]
    if n == 0:
        return Polynomial([1.0])
    s = _scale(a)
    m = a / s
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[n] = 1.0
    mk = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        am = m @ mk
        ck = -np.trace(am) / k
        coeffs[n - k] = ck
        mk = am + ck * np.eye(n, dtype=np.complex128)
    powers = s ** np.arange(n, -1, -1.0)
    return Polynomial(coeffs * powers)


def eigenvalues(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """All eigenvalues with multiplicity, dimension capped at EIG_DIM_CAP."""
    a = as_square(a)
    n = a.shape[0]
    if n > EIG_DIM_CAP:
        raise DimensionTooLarge(f"dimension {n} exceeds cap {EIG_DIM_CAP}")
    if n == 0:
        return np.empty(0, dtype=np.complex128)
    return roots(char_poly(a), tol)


def operator_norm_2(a, rel_tol: float = 1e-8, max_iter: int = 100_000) -> float:
    """Largest singular value by power iteration on A^H A.

    A^H A is normalized and squared a few times first so that nearly tied
    top singular values do not stall the iteration; the start vector is a
    fixed deterministic ramp.
    """
    a = as_square(a)
    n = a.shape[0]
    if n == 0:
        return 0.0
    h = a.conj().T @ a
    hs = float(np.abs(h).max())
    if hs == 0.0:
        return 0.0
    h = h / hs
    squarings = 3
    for _ in range(squarings):
        h = h @ h
    power = 2 ** squarings

    v = (1.0 + 0.25 * np.arange(n)) + 0.1j * np.arange(n)
    v = v / np.sqrt(float((np.abs(v) ** 2).sum()))
    prev = -1.0
    for _ in range(max_iter):
        w = h @ v
        r = float(np.real(np.vdot(v, w)))
        nw = np.sqrt(float((np.abs(w) ** 2).sum()))
        if nw == 0.0:
            return 0.0
        v = w / nw
        if prev >= 0.0 and abs(r - prev) <= rel_tol * max(r, np.finfo(float).tiny):
            r = max(r, 0.0)
            return float(np.sqrt(hs * r ** (1.0 / power)))
        prev = r
    raise ConvergenceFailure("singular value iteration hit its cap")


def condition_2(a, tol: Tolerances = DEFAULT_TOL) -> float:
    """2-norm condition estimate ||A|| * ||A^-1||."""
    return operator_norm_2(a) * operator_norm_2(inverse(a, tol))


def nullspace(a, threshold: float) -> np.ndarray:
    """Null space basis by row reduction; rows of the result span it.

    ``threshold`` is the absolute pivot cutoff (callers pass a tolerance
    already multiplied by their scale).  Works for rectangular input.
    """
    m = np.asarray(a, dtype=np.complex128).copy()
    if m.ndim != 2:
        raise ValueError("nullspace expects a 2-D array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = int(np.argmax(np.abs(m[r:, c]))) + r
        if abs(m[piv, c]) <= threshold:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] -= m[i, c] * m[r]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.complex128)
    for bi, fc in enumerate(free):
        basis[bi, fc] = 1.0
        for ri, pc in enumerate(pivots):
            basis[bi, pc] = -m[ri, fc]
    # normalize each vector to unit max-abs entry for stable comparisons
    for bi in range(len(free)):
        mx = np.abs(basis[bi]).max()
        if mx > 0:
            basis[bi] = basis[bi] / mx
    return basis
