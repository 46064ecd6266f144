"""Dense complex matrices: Hermitian validation, minors, determinants,
adjugates and two-coordinate unitary rotations.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. All indices in
the public functions are 1-based.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (
    CardinalityMismatch,
    DimensionTooSmall,
    IndexOutOfRange,
    NotHermitian,
    NotSquare,
    ValidationError,
)

HERM_TOL = 1e-10


def as_matrix(M):
    """Return ``M`` as a finite 2-D complex array (a copy)."""
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    return A


def _require_square(A):
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"matrix is {A.shape[0]}x{A.shape[1]}, expected square")


def validate_hermitian(M, herm_tol=HERM_TOL):
    """Check conjugate symmetry and return the symmetrized matrix ``(M + M^*)/2``.

    The deviation ``|M[j,k] - conj(M[k,j])|`` is measured against
    ``herm_tol * max(1, ||M||_F)``. The result has exactly real diagonal and
    exactly conjugate-symmetric off-diagonal entries.
    """
    A = as_matrix(M)
    _require_square(A)
    bound = herm_tol * max(1.0, float(np.linalg.norm(A)))
    dev = float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0
    if dev > bound:
        raise NotHermitian(dev, bound)
    H = 0.5 * (A + A.conj().T)
    # force exact symmetry: copy the upper triangle onto the lower one
    iu = np.triu_indices(H.shape[0], 1)
    H[(iu[1], iu[0])] = H[iu].conj()
    H[np.diag_indices_from(H)] = H.diagonal().real
    return H


def _check_index(j, n, name="index"):
    if not isinstance(j, (int, np.integer)) or not 1 <= j <= n:
        raise IndexOutOfRange(f"{name} {j!r} outside 1..{n}")
    return int(j)


def index_set(indices, n):
    """Validate a set of 1-based indices and return it as a sorted tuple."""
    idx = list(indices)
    vals = sorted(set(_check_index(i, n) for i in idx))
    if len(vals) != len(idx):
        raise ValidationError(f"index set {idx} has repeated members")
    if not vals:
        raise ValidationError("index set must be non-empty")
    return tuple(vals)


def complement(indices, n):
    s = set(indices)
    return tuple(i for i in range(1, n + 1) if i not in s)


def principal_minor(A, j):
    """Delete row ``j`` and column ``j``."""
    A = np.asarray(A)
    _require_square(A)
    n = A.shape[0]
    if n < 2:
        raise DimensionTooSmall("a 1x1 matrix has no principal minor")
    j = _check_index(j, n)
    keep = [k for k in range(n) if k != j - 1]
    return A[np.ix_(keep, keep)].copy()


def general_minor(A, rows_removed, cols_removed):
    """Submatrix left after deleting the given rows and columns.

    The remaining indices keep their relative order. Both index sets must
    have the same size ``m < n``.
    """
    A = np.asarray(A)
    _require_square(A)
    n = A.shape[0]
    rows = index_set(rows_removed, n)
    cols = index_set(cols_removed, n)
    if len(rows) != len(cols):
        raise CardinalityMismatch(
            f"removing {len(rows)} rows but {len(cols)} columns"
        )
    if len(rows) >= n:
        raise CardinalityMismatch(f"cannot remove {len(rows)} of {n} rows")
    keep_r = [k - 1 for k in complement(rows, n)]
    keep_c = [k - 1 for k in complement(cols, n)]
    return A[np.ix_(keep_r, keep_c)].copy()


def submatrix(A, rows, cols):
    """Submatrix keeping the given (1-based) rows and columns."""
    A = np.asarray(A)
    return A[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])].copy()


def lu_factor(A):
    """LU factorisation with partial pivoting, ``P A = L U``.

    Returns ``(lu, perm, sign)`` where ``lu`` packs the unit lower factor
    below the diagonal and ``U`` on and above it, ``perm`` is the row order
    and ``sign`` the permutation parity. A column whose largest candidate
    pivot is zero leaves a zero on the diagonal of ``U``.
    """
    lu = np.array(A, dtype=np.complex128)
    _require_square(lu)
    n = lu.shape[0]
    perm = np.arange(n)
    sign = 1
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        piv = lu[k, k]
        if piv == 0:
            continue
        lu[k + 1:, k] /= piv
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, sign


def determinant(A):
    """Determinant through LU with partial pivoting.

    Returns exactly ``0`` when a pivot falls below the underflow threshold
    ``n * tiny * max|A|``.
    """
    A = np.asarray(A, dtype=np.complex128)
    _require_square(A)
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0j
    lu, _, sign = lu_factor(A)
    diag = lu.diagonal()
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    if scale == 0.0 or np.any(np.abs(diag) <= n * np.finfo(float).tiny * scale):
        return 0j
    return complex(sign * np.prod(diag))


def adjugate_cofactor(A):
    """Adjugate from cofactors: ``adj(A)[i, j] = (-1)**(i+j) * det(M_ji)``."""
    A = np.asarray(A, dtype=np.complex128)
    _require_square(A)
    n = A.shape[0]
    if n < 2:
        raise DimensionTooSmall("adjugate needs n >= 2")
    adj = np.empty((n, n), dtype=np.complex128)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            adj[i - 1, j - 1] = (-1) ** (i + j) * determinant(
                general_minor(A, [j], [i])
            )
    return adj


@dataclass(frozen=True)
class RotationSpec:
    """Unitary mixing of coordinates ``j`` and ``k`` with phase ``omega``."""

    j: int
    k: int
    omega: complex = 1.0

    def __post_init__(self):
        if self.j == self.k:
            raise ValidationError("rotation needs two distinct coordinates")
        if abs(abs(self.omega) - 1.0) > 1e-14:
            raise ValidationError(f"omega must have unit modulus, got {self.omega!r}")


def rotation_matrix(n, spec):
    j = _check_index(spec.j, n) - 1
    k = _check_index(spec.k, n) - 1
    w = complex(spec.omega)
    G = np.eye(n, dtype=np.complex128)
    r = 1.0 / np.sqrt(2.0)
    G[j, j] = r
    G[j, k] = w * r
    G[k, j] = -w.conjugate() * r
    G[k, k] = r
    return G


def rotate_pair(A, spec):
    """Return ``G A G^*``, which has eigenvectors ``G v_i``.

    Component ``j`` of the rotated eigenvector is ``(v_j + omega v_k)/sqrt(2)``.
    """
    A = np.asarray(A, dtype=np.complex128)
    G = rotation_matrix(A.shape[0], spec)
    out = G @ A @ G.conj().T
    return validate_hermitian(out, herm_tol=1e-8)
