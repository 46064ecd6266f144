"""Random matrix generators and brute-force oracles shared by the tests."""
import itertools

import numpy as np

GOLDEN_A = np.array([[1, 1, -1], [1, 3, 1], [-1, 1, 3]], dtype=float)
GOLDEN_V = np.column_stack([
    np.array([2, -1, 1]) / np.sqrt(6),
    np.array([1, 1, -1]) / np.sqrt(3),
    np.array([0, 1, 1]) / np.sqrt(2),
])
GOLDEN_TABLE = np.array([
    [2 / 3, 1 / 6, 1 / 6],
    [1 / 3, 1 / 3, 1 / 3],
    [0.0, 1 / 2, 1 / 2],
])


def random_hermitian(rng, n, complex_=True):
    X = rng.normal(size=(n, n))
    if complex_:
        X = X + 1j * rng.normal(size=(n, n))
    return (X + X.conj().T) / 2


def min_rel_gap(A):
    lam = np.linalg.eigvalsh(A)
    if lam.size < 2:
        return np.inf
    return np.min(np.diff(lam)) / (lam[-1] - lam[0])


def simple_hermitian(rng, n, rel_gap=1e-3, complex_=True):
    """Random Hermitian matrix resampled until its eigenvalues are separated."""
    while True:
        A = random_hermitian(rng, n, complex_)
        if min_rel_gap(A) > rel_gap:
            return A


def random_unitary(rng, n):
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def planted_double(rng, n):
    """``U diag(d) U^*`` where ``d`` has exactly one repeated value.

    Returns the matrix and the 1-based indices of the repeated pair in the
    sorted spectrum.
    """
    while True:
        d = np.sort(rng.uniform(-3, 3, size=n - 1))
        if np.min(np.diff(d), initial=np.inf) > 0.05:
            break
    k = int(rng.integers(n - 1))
    d = np.sort(np.append(d, d[k]))
    U = random_unitary(rng, n)
    A = U @ np.diag(d) @ U.conj().T
    return (A + A.conj().T) / 2, (k + 1, k + 2)


def random_tridiagonal(rng, n, rel_gap=1e-3):
    from eigenid import SymmetricTridiagonal

    while True:
        T = SymmetricTridiagonal(rng.normal(size=n), rng.normal(size=n - 1))
        if min_rel_gap(T.dense()) > rel_gap:
            return T


def cofactor_det(M):
    """Determinant by Leibniz expansion over permutations (O(n!))."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    total = 0j
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = (-1) ** inversions
        for r, c in enumerate(perm):
            term *= M[r, c]
        total += term
    return total


def subset_elementary_symmetric(values, k):
    """Sum of products over all k-subsets (O(2^n))."""
    return sum(np.prod(c) for c in itertools.combinations(values, k)) if k else 1.0


def oracle_magnitudes(A):
    lam, V = np.linalg.eigh(A)
    return lam, np.abs(V.T) ** 2, V
