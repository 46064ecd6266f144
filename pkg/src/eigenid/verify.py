"""Executable checks of the eigenvector-eigenvalue identity, its variants and
its consistency properties.

Every check returns a :class:`CheckReport`. Deviations are measured on the
natural scale of each identity (powers of the norm, spread of the spectrum),
so each check has its own tolerance.
"""
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import core
from .eigensolve import eigh, eigh_jacobi, eigvalsh
from .errors import (
    CardinalityMismatch,
    DegenerateEigenvalue,
    DimensionMismatch,
    IndexOutOfRange,
    ProbeTooCloseToPole,
    ValidationError,
)
from .identity import (
    cross_term,
    magnitude_alternate,
    magnitude_sq,
    magnitude_sq_charpoly,
    magnitude_table,
    minor_spectra,
)
from .phase import pair_product, reconstruct_eigenvector
from .spectralfn import (
    char_poly_derivative,
    char_poly_derivative_at,
    char_poly_eval,
    default_tol,
    elementary_symmetric,
    group_multiplicities,
)

TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class CheckReport:
    check: str
    passed: bool
    max_abs_deviation: float
    tolerance: float
    witnesses: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.passed != (self.max_abs_deviation <= self.tolerance):
            raise ValueError(f"inconsistent report for {self.check}")

    @classmethod
    def make(cls, check, deviation, tolerance, witnesses=()):
        dev = float(deviation)
        if math.isnan(dev):
            dev = math.inf
        return cls(check, dev <= tolerance, dev, float(tolerance), tuple(witnesses))

    def to_json(self):
        d = asdict(self)
        d["witnesses"] = list(d["witnesses"])
        return d


def _spread(s):
    s = np.asarray(s, dtype=float)
    if s.size == 0:
        return 1.0
    spread = float(s[-1] - s[0])
    return spread if spread > 0 else max(1.0, float(np.max(np.abs(s))))


def _norm2(A):
    return float(np.max(np.abs(eigvalsh(A))))


# -- spectra -----------------------------------------------------------------

def check_interlacing(sA, sMj, name="interlacing"):
    """``lam_i(A) <= lam_i(M_j) <= lam_{i+1}(A)`` within ``1e-9 * spread``."""
    sA = np.sort(np.asarray(sA, dtype=float))
    sM = np.sort(np.asarray(sMj, dtype=float))
    if sA.size != sM.size + 1:
        raise DimensionMismatch(f"|sA| = {sA.size} but |sM| = {sM.size}")
    slack = 1e-9 * _spread(sA)
    viol = np.maximum(sA[:-1] - sM, sM - sA[1:]) if sM.size else np.zeros(0)
    viol = np.maximum(viol, 0.0)
    bad = [int(k) + 1 for k in np.flatnonzero(viol > slack)]
    return CheckReport.make(name, float(np.max(viol, initial=0.0)), slack, bad)


def check_normalization(table, name="normalization"):
    """Columns of the table sum to 1 and each group row to its multiplicity."""
    n = table.n
    groups, masses = table.collapsed()
    col_dev = np.abs(masses.sum(axis=0) - 1.0)
    row_dev = np.abs(masses.sum(axis=1) - np.array([len(g) for g in groups]))
    witnesses = [f"column {j + 1}" for j in np.flatnonzero(col_dev > 1e-8 * n)]
    witnesses += [f"row {groups[g][0]}" for g in np.flatnonzero(row_dev > 1e-8 * n)]
    dev = max(float(col_dev.max()), float(row_dev.max()))
    return CheckReport.make(name, dev, 1e-8 * n, witnesses)


def check_jacobi_formula(sA, minors, lam, tol=1e-9, name="jacobi_formula"):
    """``p_A'(lam) = sum_j p_{M_j}(lam)`` at a probe point (relative)."""
    sA = np.asarray(sA, dtype=float)
    if len(minors) != sA.size or any(np.size(s) != sA.size - 1 for s in minors):
        raise DimensionMismatch("need n minor spectra of size n-1")
    lhs = char_poly_derivative(sA, lam)
    terms = [char_poly_eval(s, lam) for s in minors]
    rhs = sum(terms)
    scale = max(
        sum(abs(np.prod(lam - np.delete(sA, i).astype(complex))) for i in range(sA.size)),
        sum(abs(t) for t in terms),
        TINY,
    )
    return CheckReport.make(name, abs(lhs - rhs) / scale, tol)


def check_symmetric_poly_relation(sA, minors, k, tol=1e-9, name=None):
    """``(n - k) S_k(A) = sum_j S_k(M_j)`` (relative)."""
    sA = np.asarray(sA, dtype=float)
    n = sA.size
    if not 1 <= k <= n - 1:
        raise IndexOutOfRange(f"k={k} outside 1..{n - 1}")
    lhs = (n - k) * elementary_symmetric(sA, k)
    rhs = sum(elementary_symmetric(s, k) for s in minors)
    scale = max(
        (n - k) * elementary_symmetric(np.abs(sA), k),
        sum(elementary_symmetric(np.abs(s), k) for s in minors),
        TINY,
    )
    return CheckReport.make(name or f"symmetric_poly[k={k}]", abs(lhs - rhs) / scale, tol)


def check_moment_identity(A, table, m, name=None):
    """``(A^m)_jj = sum_i lam_i^m |v_ij|^2``.

    A repeated eigenvalue contributes its group mass, so the check is exact
    for degenerate spectra as well.
    """
    A = np.asarray(A, dtype=np.complex128)
    n = A.shape[0]
    if not 0 <= m <= n - 1:
        raise IndexOutOfRange(f"m={m} outside 0..{n - 1}")
    lhs = np.linalg.matrix_power(A, m).diagonal().real
    lam = table.spectrum
    rhs = (lam ** m) @ table.values
    dev = np.abs(lhs - rhs)
    tol = 1e-8 * max(float(np.max(np.abs(lam))), TINY) ** m if m else 1e-8
    bad = [int(j) + 1 for j in np.flatnonzero(dev > tol)]
    return CheckReport.make(name or f"moment[m={m}]", float(dev.max()), tol, bad)


def check_resolvent_identity(sA, sMj, weights, lam, name="resolvent"):
    """``prod(lam - xi) / prod(lam - lam_k) = sum_i w_i / (lam - lam_i)``.

    Also checks that the right-hand side vanishes at every minor eigenvalue
    that is not itself (nearly) an eigenvalue of ``A``.
    """
    sA = np.asarray(sA, dtype=float)
    sM = np.asarray(sMj, dtype=float)
    w = np.asarray(weights, dtype=float)
    spread = _spread(sA)
    guard = 1e-6 * spread
    if np.min(np.abs(lam - sA)) < guard:
        raise ProbeTooCloseToPole(f"probe {lam} is within {guard:.3e} of a pole")
    lhs = char_poly_eval(sM, lam) / char_poly_eval(sA, lam)
    terms = w / (lam - sA)
    rhs = terms.sum()
    devs = [abs(lhs - rhs) / max(abs(lhs), float(np.abs(terms).sum()), TINY)]
    witnesses = []
    for k, xi in enumerate(sM, start=1):
        if np.min(np.abs(xi - sA)) <= guard:
            continue
        t = w / (xi - sA)
        d = abs(t.sum()) / max(float(np.abs(t).sum()), TINY)
        devs.append(d)
        if d > 1e-8:
            witnesses.append(f"xi_{k}")
    return CheckReport.make(name, max(devs), 1e-8, witnesses)


# -- perturbation and lemmas -------------------------------------------------

def check_perturbation(A, i, j, eps=None, name=None):
    """First-order shift of ``lam_i`` under ``A + eps e_j e_j^*`` is ``eps |v_ij|^2``.

    Tolerance ``10 ||A||_F eps / gap^2`` bounds the second-order term.
    """
    A = core.validate_hermitian(A)
    n = A.shape[0]
    sA = eigvalsh(A)
    tol_group = default_tol(sA)
    if not group_multiplicities(sA, tol_group).is_simple(i):
        raise DegenerateEigenvalue(f"eigenvalue {i} is repeated")
    normA = float(np.linalg.norm(A))
    if eps is None:
        eps = 1e-5 * normA
    q = magnitude_sq(sA, eigvalsh(core.principal_minor(A, j)), i) if n > 1 else 1.0
    B = A.copy()
    B[j - 1, j - 1] += eps
    slope = (eigvalsh(B)[i - 1] - sA[i - 1]) / eps
    gap = float(np.min(np.abs(np.delete(sA, i - 1) - sA[i - 1]))) if n > 1 else normA
    tol = 10.0 * normA * eps / gap ** 2
    return CheckReport.make(name or f"perturbation[i={i},j={j}]", abs(slope - q), tol)


def check_cauchy_binet(A, B, v, name="cauchy_binet"):
    """``det(B^* A B) = (-1)^(n-1) p_A'(0) |det(B | v)|^2`` for singular ``A``."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128).ravel()
    n = A.shape[0]
    if B.shape != (n, n - 1) or v.size != n:
        raise DimensionMismatch(f"B must be {n}x{n - 1} and v of length {n}")
    sA = eigvalsh(A)
    i0 = int(np.argmin(np.abs(sA))) + 1
    normA = max(float(np.max(np.abs(sA))), TINY)
    if abs(sA[i0 - 1]) > 1e-8 * max(1.0, normA):
        raise ValidationError(f"matrix has no zero eigenvalue (closest {sA[i0 - 1]:.3e})")
    if not group_multiplicities(sA, default_tol(sA)).is_simple(i0):
        raise DegenerateEigenvalue("zero eigenvalue is repeated")
    others = np.delete(sA, i0 - 1)
    dprime = float(np.prod(-others))
    lhs = core.determinant(B.conj().T @ A @ B)
    rhs = (-1) ** (n - 1) * dprime * abs(core.determinant(np.column_stack([B, v]))) ** 2
    hadamard = normA ** (n - 1) * float(np.prod(np.linalg.norm(B, axis=0) ** 2))
    scale = max(abs(lhs), abs(rhs), hadamard, TINY)
    return CheckReport.make(name, abs(lhs - rhs) / scale, 1e-8)


def _signed(indices):
    return (-1) ** sum(indices)


def check_generalized_identity(A, I, J, K, name=None):
    """Minor form of the identity for index sets of size ``m``.

    ``s conj(det U[J,I]) det U[K,I] prod_{i in I, j not in I} (lam_j - lam_i)
    = det M_{J,K}(prod_{i in I} (A - lam_i))`` with ``A = U D U^*`` and
    ``s = (-1)^(sum J + sum K)``.
    """
    A = core.validate_hermitian(A)
    n = A.shape[0]
    I = core.index_set(I, n)
    J = core.index_set(J, n)
    K = core.index_set(K, n)
    m = len(I)
    if len(J) != m or len(K) != m or m >= n:
        raise CardinalityMismatch(f"need |I| = |J| = |K| < {n}")
    lam, U = eigh(A)
    Ic = core.complement(I, n)
    lhs = (
        _signed(J + K)
        * np.conj(core.determinant(core.submatrix(U, J, I)))
        * core.determinant(core.submatrix(U, K, I))
        * np.prod([lam[b - 1] - lam[a - 1] for a in I for b in Ic])
    )
    P = np.eye(n, dtype=np.complex128)
    for a in I:
        P = P @ (A - lam[a - 1] * np.eye(n))
    rhs = core.determinant(core.general_minor(P, J, K))
    scale = max(abs(lhs), abs(rhs), (2.0 * max(_norm2(A), TINY)) ** (m * (n - m)), TINY)
    return CheckReport.make(
        name or f"generalized_identity[I={list(I)},J={list(J)},K={list(K)}]",
        abs(lhs - rhs) / scale, 1e-7,
    )


def check_minor_duality(U, I, J, name=None):
    """``det M_{J,I}(U) = (-1)^(sum I + sum J) conj(det U[J,I]) det U`` for unitary ``U``."""
    U = np.asarray(U, dtype=np.complex128)
    n = U.shape[0]
    I = core.index_set(I, n)
    J = core.index_set(J, n)
    if len(I) != len(J) or len(I) >= n:
        raise CardinalityMismatch(f"need |I| = |J| < {n}")
    lhs = core.determinant(core.general_minor(U, J, I))
    rhs = _signed(I + J) * np.conj(core.determinant(core.submatrix(U, J, I))) * core.determinant(U)
    return CheckReport.make(
        name or f"minor_duality[I={list(I)},J={list(J)}]", abs(lhs - rhs), 1e-9
    )


# -- cross-path agreement ----------------------------------------------------

def check_path_agreement(A, tol=1e-7, name="path_agreement"):
    """All magnitude routes against ``|v_ij|^2`` from :func:`eigh`.

    Repeated eigenvalues are skipped, as are alternate-path entries whose
    shift is an eigenvalue of the minor.
    """
    A = core.validate_hermitian(A)
    n = A.shape[0]
    oracle = eigh(A)
    sA = oracle.values
    minors = minor_spectra(A)
    grouping = group_multiplicities(sA, default_tol(sA))
    dev, witnesses = 0.0, []
    for i in range(1, n + 1):
        if not grouping.is_simple(i):
            continue
        for j in range(1, n + 1):
            ref = abs(oracle.vectors[j - 1, i - 1]) ** 2
            vals = {
                "identity": magnitude_sq(sA, minors[j - 1], i),
                "charpoly": magnitude_sq_charpoly(sA, minors[j - 1], i),
                "cross": cross_term(A, sA, i, j, j).value.real,
            }
            if n > 1 and np.min(np.abs(minors[j - 1] - sA[i - 1])) > default_tol(sA):
                vals["alternate"] = magnitude_alternate(A, sA[i - 1], j, minors[j - 1])
            for key, v in vals.items():
                d = abs(v - ref)
                dev = max(dev, d)
                if d > tol:
                    witnesses.append(f"{key}[i={i},j={j}]")
    return CheckReport.make(name, dev, tol, witnesses)


def check_cross_terms(A, tol=1e-7, name="cross_terms"):
    """Off-diagonal adjugate products against ``v_ij conj(v_ij')`` from the
    oracle, for simple eigenvalues."""
    A = core.validate_hermitian(A)
    n = A.shape[0]
    lam, V = eigh(A)
    grouping = group_multiplicities(lam, default_tol(lam))
    dev, witnesses = 0.0, []
    for i in range(1, n + 1):
        if not grouping.is_simple(i):
            continue
        for j in range(1, n + 1):
            for jp in range(1, n + 1):
                ref = V[j - 1, i - 1] * np.conj(V[jp - 1, i - 1])
                d = abs(cross_term(A, lam, i, j, jp).value - ref)
                dev = max(dev, d)
                if d > tol:
                    witnesses.append(f"i={i},j={j},j'={jp}")
    return CheckReport.make(name, dev, tol, witnesses)


def check_adjugate_projection(A, i, name=None):
    """``adj(lam_i I - A) = p_A'(lam_i) v_i v_i^*`` (relative)."""
    A = core.validate_hermitian(A)
    n = A.shape[0]
    lam, V = eigh(A)
    if not group_multiplicities(lam, default_tol(lam)).is_simple(i):
        raise DegenerateEigenvalue(f"eigenvalue {i} is repeated")
    adj = core.adjugate_cofactor(lam[i - 1] * np.eye(n) - A)
    dp = char_poly_derivative_at(lam, i)
    ref = dp * np.outer(V[:, i - 1], V[:, i - 1].conj())
    scale = max(abs(dp), (2.0 * max(_norm2(A), TINY)) ** (n - 1))
    return CheckReport.make(
        name or f"adjugate_projection[i={i}]", float(np.max(np.abs(adj - ref))) / scale, 1e-9
    )


def check_phase_orthogonality(A, j, k, name=None):
    """``sum_i v_ij conj(v_ik) = 0`` using products recovered in rotated bases."""
    A = core.validate_hermitian(A)
    n = A.shape[0]
    sA = eigvalsh(A)
    if group_multiplicities(sA, default_tol(sA)).has_repeats:
        raise DegenerateEigenvalue("phase recovery needs a simple spectrum")
    minors = minor_spectra(A)
    total = sum(pair_product(A, sA, i, j, k, minors=minors) for i in range(1, n + 1))
    return CheckReport.make(name or f"phase_orthogonality[j={j},k={k}]", abs(total), 1e-6)


def check_reconstruction(A, i, name=None):
    """Residual ``||A v - lam_i v|| <= 1e-7 ||A||_F`` of the recovered vector."""
    A = core.validate_hermitian(A)
    r = reconstruct_eigenvector(A, i)
    v = r.components
    res = float(np.linalg.norm(A @ v - r.eigenvalue * v))
    return CheckReport.make(
        name or f"reconstruction[i={i}]", res, 1e-7 * max(float(np.linalg.norm(A)), TINY)
    )


def check_solver_agreement(A, name="solver_agreement"):
    """Spectra of the QL and Jacobi solvers within ``1e-10 ||A||_F``."""
    A = core.validate_hermitian(A)
    a = eigh(A)
    b = eigh_jacobi(A)
    dev = float(np.max(np.abs(a.values - b.values)))
    return CheckReport.make(name, dev, 1e-10 * max(float(np.linalg.norm(A)), TINY))


# -- metamorphic ---------------------------------------------------------------

def _table_deviation(t1, t2, col_map=None, reverse=False):
    g1, m1 = t1.collapsed()
    g2, m2 = t2.collapsed()
    if reverse:
        g2 = g2[::-1]
        m2 = m2[::-1]
    if [len(g) for g in g1] != [len(g) for g in g2]:
        return math.inf
    if col_map is not None:
        m2 = m2[:, np.argsort(col_map)]
    return float(np.max(np.abs(m1 - m2)))


def check_shift_invariance(A, c, tol=1e-9, name="metamorphic_shift"):
    A = core.validate_hermitian(A)
    n = A.shape[0]
    return CheckReport.make(
        name, _table_deviation(magnitude_table(A), magnitude_table(A + c * np.eye(n))), tol
    )


def check_scale_invariance(A, c, tol=1e-9, name=None):
    """Tables of ``A`` and ``cA`` agree; for ``c < 0`` eigenvalue order reverses."""
    A = core.validate_hermitian(A)
    if c == 0:
        raise ValidationError("scale factor must be non-zero")
    dev = _table_deviation(magnitude_table(A), magnitude_table(c * A), reverse=c < 0)
    return CheckReport.make(name or f"metamorphic_scale[c={c:g}]", dev, tol)


def check_permutation_invariance(A, perm, tol=1e-9, name="metamorphic_permutation"):
    """``table(P A P^T)[:, a] = table(A)[:, perm[a]]`` with 0-based ``perm``."""
    A = core.validate_hermitian(A)
    perm = np.asarray(perm)
    B = A[np.ix_(perm, perm)]
    g1, m1 = magnitude_table(A).collapsed()
    g2, m2 = magnitude_table(B).collapsed()
    if [len(g) for g in g1] != [len(g) for g in g2]:
        return CheckReport.make(name, math.inf, tol)
    return CheckReport.make(name, float(np.max(np.abs(m1[:, perm] - m2))), tol)


def check_phase_invariance(A, thetas, tol=1e-9, name="metamorphic_phase"):
    """Tables are unchanged by conjugation with a diagonal unitary."""
    A = core.validate_hermitian(A)
    D = np.exp(1j * np.asarray(thetas, dtype=float))
    B = D[:, None] * A * D.conj()[None, :]
    return CheckReport.make(
        name, _table_deviation(magnitude_table(A), magnitude_table(B)), tol
    )


def check_diagonal_case(A, name="diagonal_case"):
    """For ``D = diag(A)`` the table is the indicator of where each diagonal
    entry lands in the sorted spectrum."""
    d = np.asarray(A, dtype=np.complex128).diagonal().real
    t = magnitude_table(np.diag(d))
    groups, masses = t.collapsed()
    expected = np.zeros_like(masses)
    for g, members in enumerate(groups):
        lo = t.spectrum[members[0] - 1] - t.grouping.tol
        hi = t.spectrum[members[-1] - 1] + t.grouping.tol
        expected[g] = (d >= lo) & (d <= hi)
    return CheckReport.make(name, float(np.max(np.abs(masses - expected))), 1e-12)


# -- driver ------------------------------------------------------------------

def probe_points(s, count, rng, poles=None):
    """Seeded probes in ``[min - spread, max + spread]`` away from the poles."""
    s = np.asarray(s, dtype=float)
    poles = s if poles is None else np.asarray(poles, dtype=float)
    spread = _spread(s)
    lo, hi = s[0] - spread, s[-1] + spread
    out = []
    while len(out) < count:
        x = rng.uniform(lo, hi)
        if poles.size == 0 or np.min(np.abs(x - poles)) > 1e-6 * spread:
            out.append(float(x))
    return out


def _random_sets(rng, n, m):
    return tuple(int(x) + 1 for x in np.sort(rng.choice(n, size=m, replace=False)))


def run_full_suite(A, seed=0, threads=None):
    """Run every check on ``A``; deterministic for a given seed.

    Checks that need a simple eigenvalue are run for the simple ones only.
    Reports are ordered by check name.
    """
    A = core.validate_hermitian(A)
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    table = magnitude_table(A, threads=threads)
    sA = table.spectrum
    minors = table.minor_spectra
    grouping = table.grouping
    simple = [i for i in range(1, n + 1) if grouping.is_simple(i)]
    normA = float(np.linalg.norm(A))
    reports = []

    reports.append(check_solver_agreement(A))
    reports.append(check_normalization(table))
    for j in range(1, n + 1):
        reports.append(check_interlacing(sA, minors[j - 1], name=f"interlacing[j={j}]"))
    for p, lam in enumerate(probe_points(sA, 5, rng), start=1):
        reports.append(check_jacobi_formula(sA, minors, lam, name=f"jacobi_formula[probe={p}]"))
    for k in range(1, n):
        reports.append(check_symmetric_poly_relation(sA, minors, k))
    for m in range(n):
        reports.append(check_moment_identity(A, table, m))
    for j in range(1, n + 1):
        (lam,) = probe_points(sA, 1, rng)
        reports.append(check_resolvent_identity(
            sA, minors[j - 1], table.values[:, j - 1], lam, name=f"resolvent[j={j}]"))

    pairs = [(i, j) for i in simple for j in range(1, n + 1)]
    if len(pairs) > 4 * n:
        pairs = [pairs[k] for k in np.sort(rng.choice(len(pairs), 4 * n, replace=False))]
    for i, j in pairs:
        reports.append(check_perturbation(A, i, j))

    for i in simple:
        if n < 2:
            break
        lam, V = eigh(A - sA[i - 1] * np.eye(n))
        i0 = int(np.argmin(np.abs(lam)))
        B = rng.normal(size=(n, n - 1)) + 1j * rng.normal(size=(n, n - 1))
        reports.append(check_cauchy_binet(
            A - sA[i - 1] * np.eye(n), B, V[:, i0], name=f"cauchy_binet[i={i}]"))

    if n >= 2:
        lam, U = eigh(A)
        for m in (1, 2):
            if m >= n:
                continue
            for _ in range(3):
                I, J, K = (_random_sets(rng, n, m) for _ in range(3))
                reports.append(check_generalized_identity(A, I, J, K))
                reports.append(check_minor_duality(U, I, J))
        for i in simple:
            reports.append(check_generalized_identity(A, [i], [1], [1]))

    if simple and n > 1:
        reports.append(check_path_agreement(A))
        reports.append(check_cross_terms(A))
    if n <= 8:
        for i in simple:
            if n > 1:
                reports.append(check_adjugate_projection(A, i))
    if n >= 2 and len(simple) == n:
        reports.append(check_phase_orthogonality(A, 1, 2))
    if n <= 10:
        for i in simple:
            reports.append(check_reconstruction(A, i))

    c = float(rng.uniform(-2.0, 2.0)) * max(normA, 1.0)
    reports.append(check_shift_invariance(A, c))
    reports.append(check_scale_invariance(A, float(rng.uniform(0.1, 10.0))))
    reports.append(check_scale_invariance(A, -float(rng.uniform(0.1, 10.0))))
    reports.append(check_permutation_invariance(A, rng.permutation(n)))
    reports.append(check_phase_invariance(A, rng.uniform(0, 2 * np.pi, size=n)))
    reports.append(check_diagonal_case(A))
    return sorted(reports, key=lambda r: r.check)
