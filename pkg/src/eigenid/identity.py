"""Eigenvector component magnitudes from eigenvalues.

For a Hermitian ``A`` with sorted eigenvalues ``lam`` and the sorted
eigenvalues ``xi`` of the minor ``M_j`` (row and column ``j`` deleted)::

    |v_ij|^2 * prod_{k != i} (lam_i - lam_k) = prod_k (lam_i - xi_k)

The main path :func:`magnitude_sq` evaluates the ratio as a product of
factors that interlacing confines to ``[0, 1]``. The other functions here
are independent routes to the same numbers, used for cross-checking.
"""
import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import core
from .eigensolve import SymmetricTridiagonal, as_spectrum, eigvalsh
from .errors import (
    DegenerateEigenvalue,
    DimensionMismatch,
    IndexOutOfRange,
    InterlacingViolation,
    SingularShift,
    ValidationError,
)
from .spectralfn import (
    char_poly_derivative_at,
    char_poly_eval,
    default_tol,
    group_multiplicities,
)

INTERLACE_SLACK = 10.0
VIOLATION_THRESHOLD = 1e-6


class MagnitudeFlag(str, enum.Enum):
    EXACT_ZERO = "exact-zero"
    COMPUTED = "computed"
    DEGENERATE = "degenerate-group-mass"


@dataclass(frozen=True)
class MagnitudeTable:
    """``values[i-1, j-1] = |v_ij|^2`` with a flag per entry.

    For a repeated eigenvalue the identity only fixes the total mass of the
    eigenspace. Such a group stores its mass in the row of its first index,
    zeros in the other rows, and every row of the group is flagged
    ``DEGENERATE``. Column sums are therefore always 1.
    """

    values: np.ndarray
    flags: tuple
    grouping: object
    spectrum: np.ndarray
    minor_spectra: tuple

    @property
    def n(self):
        return self.values.shape[0]

    def collapsed(self):
        """Return ``(groups, masses)`` with one row of ``masses`` per group."""
        groups = self.grouping.groups
        masses = np.array([self.values[g[0] - 1] for g in groups])
        return groups, masses


@dataclass(frozen=True)
class CrossTerm:
    i: int
    j: int
    jp: int
    value: complex


@dataclass(frozen=True)
class BlockSplit:
    """``A`` (after moving index ``j`` to the front) as ``[[a11, X^*], [X, M1]]``."""

    a11: float
    X: np.ndarray
    M1: np.ndarray
    j: int = 1

    @classmethod
    def of(cls, A, j=1):
        A = np.asarray(A, dtype=np.complex128)
        n = A.shape[0]
        j = core._check_index(j, n)
        rest = [k for k in range(n) if k != j - 1]
        return cls(float(A[j - 1, j - 1].real), A[rest, j - 1].copy(),
                   A[np.ix_(rest, rest)].copy(), j)

    def assemble(self):
        n = self.M1.shape[0] + 1
        A = np.empty((n, n), dtype=np.complex128)
        rest = [k for k in range(n) if k != self.j - 1]
        A[self.j - 1, self.j - 1] = self.a11
        A[rest, self.j - 1] = self.X
        A[self.j - 1, rest] = self.X.conj()
        A[np.ix_(rest, rest)] = self.M1
        return A


def _check_sizes(sA, sM):
    sA = as_spectrum(sA)
    sM = as_spectrum(sM) if np.size(sM) else np.empty(0)
    if sM.size != sA.size - 1:
        raise DimensionMismatch(
            f"minor spectrum has {sM.size} values, expected {sA.size - 1}"
        )
    return sA, sM


def _check_index(i, n):
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"eigenvalue index {i} outside 1..{n}")


def _require_simple(sA, i, tol):
    # with chained grouping, i is simple iff both neighbour gaps exceed tol
    lam = sA[i - 1]
    if (i == 1 or lam - sA[i - 2] > tol) and (i == sA.size or sA[i] - lam > tol):
        return
    grouping = group_multiplicities(sA, tol)
    if not grouping.is_simple(i):
        g = grouping.groups[grouping.group_of(i)]
        raise DegenerateEigenvalue(
            f"eigenvalue {i} is repeated (group {list(g)}); only the group "
            f"mass is determined"
        )


def _check_interlacing(sA, sM, slack):
    low = sA[:-1] - sM
    high = sM - sA[1:]
    worst = max(float(np.max(low, initial=0.0)), float(np.max(high, initial=0.0)))
    if worst > slack:
        bad = np.flatnonzero((low > slack) | (high > slack)) + 1
        raise InterlacingViolation(
            f"minor spectrum violates interlacing by {worst:.3e} at {list(bad)}"
        )


def _paired_product(lam, below_A, below_M, above_A, above_M):
    """Product of interlacing-paired ratios, raw and clamped."""
    lower = (lam - below_M) / (lam - below_A)
    upper = (above_M - lam) / (above_A - lam)
    factors = np.concatenate([lower, upper])
    raw = float(np.prod(factors))
    if raw < -VIOLATION_THRESHOLD or raw > 1.0 + VIOLATION_THRESHOLD:
        raise InterlacingViolation(
            f"paired product {raw:.6g} is outside [0, 1]; spectra are inconsistent"
        )
    return min(1.0, max(0.0, float(np.prod(np.clip(factors, 0.0, 1.0)))))


def magnitude_sq(sA, sMj, i, tol=None):
    """``|v_ij|^2`` from the spectra of ``A`` and of its minor ``M_j``.

    Evaluated as ``prod_{k<i} (lam_i - xi_k)/(lam_i - lam_k) *
    prod_{k>=i} (xi_k - lam_i)/(lam_{k+1} - lam_i)``, where interlacing
    puts every factor in ``[0, 1]``. Each factor is clamped before
    multiplying; a raw product outside ``[-1e-6, 1 + 1e-6]`` raises.
    """
    sA, sM = _check_sizes(sA, sMj)
    n = sA.size
    _check_index(i, n)
    if n == 1:
        return 1.0
    if tol is None:
        tol = default_tol(sA)
    _require_simple(sA, i, tol)
    _check_interlacing(sA, sM, INTERLACE_SLACK * tol)
    lam = sA[i - 1]
    return _paired_product(lam, sA[: i - 1], sM[: i - 1], sA[i:], sM[i - 1:])


def magnitude_sq_charpoly(sA, sMj, i, tol=None):
    """Unclamped ``p_{M_j}(lam_i) / p_A'(lam_i)``."""
    sA, sM = _check_sizes(sA, sMj)
    _check_index(i, sA.size)
    if tol is None:
        tol = default_tol(sA)
    _require_simple(sA, i, tol)
    lam = sA[i - 1]
    return char_poly_eval(sM, lam).real / char_poly_derivative_at(sA, i)


def magnitude_group(sA, sMj, members, tol=None):
    """Total ``sum_{i in members} |v_ij|^2`` over a repeated eigenvalue.

    ``members`` are the contiguous 1-based indices of one multiplicity
    group with representative ``lam*`` (their mean) and size ``m``. The
    residue of ``p_{M_j} / p_A`` at ``lam*`` is formed by cancelling the
    ``m`` copies of ``lam*`` in ``A`` against the ``m - 1`` minor eigenvalues
    that interlacing pins to ``lam*``; the remaining factors are paired as
    in :func:`magnitude_sq`. With ``m = 1`` this is ``magnitude_sq``.
    """
    sA, sM = _check_sizes(sA, sMj)
    n = sA.size
    members = tuple(int(k) for k in members)
    m = len(members)
    if m == 0 or list(members) != list(range(members[0], members[0] + m)):
        raise ValidationError(f"group {members} must be a non-empty contiguous run")
    g = members[0]
    _check_index(g, n)
    _check_index(members[-1], n)
    if tol is None:
        tol = default_tol(sA)
    lam = float(np.mean(sA[g - 1: g - 1 + m]))
    width = float(sA[g - 2 + m] - sA[g - 1])
    slack = INTERLACE_SLACK * max(tol, width)
    pinned = sM[g - 1: g - 2 + m]
    if pinned.size != m - 1 or np.any(np.abs(pinned - lam) > slack):
        raise InterlacingViolation(
            f"expected {m - 1} minor eigenvalues at {lam:.6g}, got {list(pinned)}"
        )
    _check_interlacing(sA, sM, INTERLACE_SLACK * tol)
    if n == 1:
        return 1.0
    return _paired_product(
        lam, sA[: g - 1], sM[: g - 1], sA[g - 1 + m:], sM[g - 2 + m:]
    )


def minor_spectra(A, threads=None):
    """Sorted spectra of all principal minors ``M_1 .. M_n``.

    The solves are independent, so running them on a thread pool returns
    bitwise the same arrays as running them in order.
    """
    A = np.asarray(A, dtype=np.complex128)
    n = A.shape[0]
    if n == 1:
        return (np.empty(0),)

    def one(j):
        return eigvalsh(core.principal_minor(A, j))

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return tuple(pool.map(one, range(1, n + 1)))
    return tuple(one(j) for j in range(1, n + 1))


def magnitude_table(A, tol=None, threads=None):
    """All ``|v_ij|^2`` of a Hermitian matrix from ``n + 1`` eigenvalue solves."""
    A = core.validate_hermitian(A)
    n = A.shape[0]
    sA = eigvalsh(A)
    minors = minor_spectra(A, threads)
    if tol is None:
        tol = default_tol(sA)
    grouping = group_multiplicities(sA, tol)
    values = np.zeros((n, n))
    flags = [[MagnitudeFlag.COMPUTED] * n for _ in range(n)]
    for members in grouping.groups:
        for j in range(1, n + 1):
            if len(members) == 1:
                q = magnitude_sq(sA, minors[j - 1], members[0], tol)
                flag = MagnitudeFlag.EXACT_ZERO if q == 0.0 else MagnitudeFlag.COMPUTED
                flags[members[0] - 1][j - 1] = flag
            else:
                q = magnitude_group(sA, minors[j - 1], members, tol)
                for i in members:
                    flags[i - 1][j - 1] = MagnitudeFlag.DEGENERATE
            values[members[0] - 1, j - 1] = q
    return MagnitudeTable(values, tuple(tuple(r) for r in flags), grouping, sA, minors)


def cross_term(A, sA, i, j, jp, tol=None):
    """``v_ij * conj(v_ij')`` from the adjugate of ``lam_i I - A``.

    Computes ``(-1)**(j+j') det(lam_i I_{j'j} - M_{j'j}) / p_A'(lam_i)``
    where ``X_{j'j}`` deletes row ``j'`` and column ``j``.
    """
    A = np.asarray(A, dtype=np.complex128)
    sA = as_spectrum(sA)
    n = A.shape[0]
    if sA.size != n:
        raise DimensionMismatch(f"spectrum has {sA.size} values for an {n}x{n} matrix")
    _check_index(i, n)
    core._check_index(j, n)
    core._check_index(jp, n)
    if tol is None:
        tol = default_tol(sA)
    _require_simple(sA, i, tol)
    if n == 1:
        return CrossTerm(i, j, jp, 1.0 + 0j)
    lam = sA[i - 1]
    shifted = lam * core.general_minor(np.eye(n), [jp], [j]) - core.general_minor(A, [jp], [j])
    value = (-1) ** (j + jp) * core.determinant(shifted) / char_poly_derivative_at(sA, i)
    if j == jp:
        value = complex(value.real, 0.0)
    return CrossTerm(i, j, jp, complex(value))


def magnitude_alternate(A, lam, j, sMj=None, tol=None):
    """``1 / (1 + X^* (lam I - M_j)^{-2} X)`` with ``X`` the ``j``-th column of
    ``A`` less its diagonal entry.

    ``lam`` must be an eigenvalue of ``A`` and must not be an eigenvalue of
    ``M_j``. The shifted system is solved with a Hermitian-indefinite
    (Bunch-Kaufman LDL^*) factorisation.
    """
    split = BlockSplit.of(A, j)
    if split.M1.shape[0] == 0:
        return 1.0
    if sMj is None:
        sMj = eigvalsh(split.M1)
    sMj = as_spectrum(sMj)
    if tol is None:
        tol = default_tol(np.append(sMj, lam))
    gap = float(np.min(np.abs(sMj - lam)))
    if gap <= tol:
        raise SingularShift(
            f"shift {lam:.6g} is within {gap:.3e} of an eigenvalue of minor {j}"
        )
    K = lam * np.eye(split.M1.shape[0]) - split.M1
    y = scipy.linalg.solve(K, split.X, assume_a="her")
    return float(1.0 / (1.0 + np.vdot(y, y).real))


def paige_char_recurrence(T, r_start, r_end, lam):
    """``det(lam I - T[r_start+1 .. r_end])`` by the three-term recurrence.

    Rows are 1-based and inclusive; an empty block (``r_start == r_end``)
    gives 1.
    """
    n = T.n
    if not 0 <= r_start <= r_end <= n:
        raise IndexOutOfRange(f"block ({r_start}, {r_end}] outside 0..{n}")
    p_prev, p = 0.0, 1.0
    for row in range(r_start, r_end):  # 0-based row index
        b2 = T.offdiag[row - 1] ** 2 if row > r_start else 0.0
        p_prev, p = p, (lam - T.diag[row]) * p - b2 * p_prev
    return float(p)


def _paige_setup(T, sT, i, tol):
    sT = as_spectrum(sT)
    if sT.size != T.n:
        raise DimensionMismatch(f"spectrum has {sT.size} values, matrix is {T.n}x{T.n}")
    _check_index(i, T.n)
    if tol is None:
        tol = default_tol(sT)
    _require_simple(sT, i, tol)
    return sT[i - 1], char_poly_derivative_at(sT, i)


def paige_magnitude(T, sT, i, r, tol=None):
    """Squared ``r``-th component of the ``i``-th unit eigenvector of ``T``:
    ``p_{0,r-1}(mu_i) p_{r,n}(mu_i) / f(i)``, clamped to ``[0, 1]``."""
    if not isinstance(T, SymmetricTridiagonal):
        raise ValidationError("paige_magnitude needs a SymmetricTridiagonal")
    mu, f = _paige_setup(T, sT, i, tol)
    if not 1 <= r <= T.n:
        raise IndexOutOfRange(f"component {r} outside 1..{T.n}")
    val = paige_char_recurrence(T, 0, r - 1, mu) * paige_char_recurrence(T, r, T.n, mu) / f
    return min(1.0, max(0.0, val))


def paige_cross(T, sT, i, r, s, tol=None):
    """Signed product ``y_ri * y_si`` for ``r < s``:
    ``b_r ... b_{s-1} p_{0,r-1}(mu_i) p_{s,n}(mu_i) / f(i)``."""
    if not isinstance(T, SymmetricTridiagonal):
        raise ValidationError("paige_cross needs a SymmetricTridiagonal")
    mu, f = _paige_setup(T, sT, i, tol)
    if not 1 <= r < s <= T.n:
        raise IndexOutOfRange(f"need 1 <= r < s <= {T.n}, got r={r}, s={s}")
    coupling = float(np.prod(T.offdiag[r - 1: s - 1]))
    return (coupling * paige_char_recurrence(T, 0, r - 1, mu)
            * paige_char_recurrence(T, s, T.n, mu) / f)
