"""Hermitian eigensolvers.

Two independent routes are provided:

* :func:`eigh` -- Householder reduction to a real symmetric tridiagonal
  matrix followed by implicit QL iterations with a Wilkinson shift.
* :func:`eigh_jacobi` -- cyclic complex Jacobi rotations, used as an oracle.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, ValidationError

EPS = 2.0 ** -52
QL_MAX_ITER = 50
JACOBI_MAX_SWEEPS = 30


@dataclass(frozen=True)
class SymmetricTridiagonal:
    """Real symmetric tridiagonal matrix ``diag`` / ``offdiag``.

    ``offdiag[k]`` couples rows ``k`` and ``k + 1`` (0-based storage).
    """

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float).copy()
        e = np.asarray(self.offdiag, dtype=float).copy()
        if d.ndim != 1 or e.ndim != 1 or d.size < 1 or e.size != d.size - 1:
            raise ValidationError(
                f"tridiagonal needs n diagonal and n-1 off-diagonal values, "
                f"got {d.size} and {e.size}"
            )
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValidationError("tridiagonal entries must be finite")
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self):
        return self.diag.size

    def dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class EigenDecomposition:
    """Sorted eigenvalues and matching unit eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray

    def __iter__(self):
        return iter((self.values, self.vectors))


def as_spectrum(values):
    """Return ``values`` as a sorted 1-D float array."""
    s = np.sort(np.asarray(values, dtype=float).ravel())
    if not np.all(np.isfinite(s)):
        raise ValidationError("spectrum has non-finite values")
    return s


def tridiagonalize(A):
    """Householder reduction ``Q^* A Q = T``.

    Returns ``(T, Q)``. Complex off-diagonal entries are rotated onto the
    non-negative real axis by a diagonal phase transform absorbed into ``Q``.
    Entries that already come out real keep their sign, so real tridiagonal
    input is returned unchanged with ``Q = I``.
    """
    H = np.array(A, dtype=np.complex128)
    n = H.shape[0]
    Q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        alpha = np.linalg.norm(x)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        # H <- P H P with P = I - 2 v v^* acting on rows/cols k+1..
        sub = H[k + 1:, :]
        sub -= 2.0 * np.outer(v, v.conj() @ sub)
        sub = H[:, k + 1:]
        sub -= 2.0 * np.outer(sub @ v, v.conj())
        Qs = Q[:, k + 1:]
        Qs -= 2.0 * np.outer(Qs @ v, v.conj())

    diag = H.diagonal().real.copy()
    sub = H.diagonal(-1).copy()
    offdiag = np.empty(max(n - 1, 0))
    d = np.ones(n, dtype=np.complex128)
    for k in range(n - 1):
        w = sub[k] * d[k]
        if w.imag == 0.0:
            d[k + 1] = 1.0
            offdiag[k] = w.real
        else:
            d[k + 1] = w / abs(w)
            offdiag[k] = abs(w)
    Q = Q * d[np.newaxis, :]
    return SymmetricTridiagonal(diag, offdiag), Q


def _ql_implicit(d, e, Z=None):
    """Implicit QL with Wilkinson shift on ``d``/``e`` in place.

    ``e`` has length n (last entry is scratch). When ``Z`` is given, plane
    rotations are accumulated into its columns.
    """
    n = d.size
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd or abs(e[m]) < np.finfo(float).tiny:
                    break
                m += 1
            if m == l:
                break
            if it == QL_MAX_ITER:
                raise NoConvergence(
                    f"QL iteration did not converge for eigenvalue {l + 1} "
                    f"after {QL_MAX_ITER} iterations"
                )
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + np.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if Z is not None:
                    zi1 = Z[:, i + 1].copy()
                    Z[:, i + 1] = s * Z[:, i] + c * zi1
                    Z[:, i] = c * Z[:, i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def eigvals_tridiag(T):
    """All eigenvalues of a symmetric tridiagonal matrix, ascending."""
    d = np.array(T.diag, dtype=float)
    e = np.zeros(d.size)
    e[: d.size - 1] = T.offdiag
    _ql_implicit(d, e)
    return np.sort(d)


def canonicalize_phases(V):
    """Scale each column so its largest-magnitude entry is real positive.

    Ties go to the lowest index.
    """
    V = np.array(V, dtype=np.complex128)
    for c in range(V.shape[1]):
        col = V[:, c]
        p = int(np.argmax(np.abs(col)))
        a = col[p]
        if a != 0:
            V[:, c] = col * (abs(a) / a)
            V[p, c] = abs(a)
    return V


def _sorted_decomposition(values, vectors):
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(
        np.asarray(values, dtype=float)[order], canonicalize_phases(vectors[:, order])
    )


def eigh_tridiag(T):
    """Eigen-decomposition of a symmetric tridiagonal matrix."""
    d = np.array(T.diag, dtype=float)
    e = np.zeros(d.size)
    e[: d.size - 1] = T.offdiag
    Z = np.eye(d.size, dtype=np.complex128)
    _ql_implicit(d, e, Z)
    return _sorted_decomposition(d, Z)


def eigvalsh(A):
    """Sorted eigenvalues of a Hermitian matrix (fast path, no vectors)."""
    A = np.asarray(A, dtype=np.complex128)
    if A.shape[0] == 0:
        return np.empty(0)
    T, _ = tridiagonalize(A)
    return eigvals_tridiag(T)


def eigh(A):
    """Full Hermitian eigen-decomposition via tridiagonal QL."""
    A = np.asarray(A, dtype=np.complex128)
    T, Q = tridiagonalize(A)
    d = np.array(T.diag, dtype=float)
    e = np.zeros(d.size)
    e[: d.size - 1] = T.offdiag
    Z = Q.copy()
    _ql_implicit(d, e, Z)
    return _sorted_decomposition(d, Z)


def eigh_jacobi(A, tol=1e-14):
    """Cyclic complex Jacobi eigen-decomposition.

    Sweeps until the off-diagonal Frobenius mass is at most
    ``tol * ||A||_F``; gives up after 30 sweeps.
    """
    H = np.array(A, dtype=np.complex128)
    n = H.shape[0]
    V = np.eye(n, dtype=np.complex128)
    target = tol * np.linalg.norm(H)
    for _ in range(JACOBI_MAX_SWEEPS + 1):
        # direct sum; ||H||^2 - ||diag||^2 cancels down to sqrt(eps)
        off = np.linalg.norm(H - np.diag(H.diagonal()))
        if off <= target:
            return _sorted_decomposition(H.diagonal().real, V)
        if _ == JACOBI_MAX_SWEEPS:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = H[p, q]
                g = abs(apq)
                if g == 0.0:
                    continue
                app = H[p, p].real
                aqq = H[q, q].real
                theta = (aqq - app) / (2.0 * g)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                ph = apq / g
                # J = [[c, s], [-s conj(ph), c conj(ph)]] embedded at (p, q)
                J = np.array([[c, s], [-s * ph.conjugate(), c * ph.conjugate()]])
                idx = [p, q]
                H[:, idx] = H[:, idx] @ J
                H[idx, :] = J.conj().T @ H[idx, :]
                H[p, q] = H[q, p] = 0.0
                H[p, p] = H[p, p].real
                H[q, q] = H[q, q].real
                V[:, idx] = V[:, idx] @ J
    raise NoConvergence(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
