import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigenid import (
    BlockSplit,
    SymmetricTridiagonal,
    core,
    cross_term,
    eigvalsh,
    magnitude_alternate,
    magnitude_group,
    magnitude_sq,
    magnitude_sq_charpoly,
    magnitude_table,
    minor_spectra,
    paige_char_recurrence,
    paige_cross,
    paige_magnitude,
    tridiagonalize,
)
from eigenid.errors import (
    DegenerateEigenvalue,
    DimensionMismatch,
    InterlacingViolation,
    SingularShift,
)
from eigenid.identity import MagnitudeFlag
from eigenid.spectralfn import char_poly_eval
from util import (
    GOLDEN_A,
    GOLDEN_TABLE,
    oracle_magnitudes,
    planted_double,
    random_tridiagonal,
    simple_hermitian,
)

seeds = st.integers(0, 2**32 - 1)
SA = [0.0, 3.0, 4.0]
SM = ([2.0, 4.0], [2 - np.sqrt(2), 2 + np.sqrt(2)], [2 - np.sqrt(2), 2 + np.sqrt(2)])


# -- magnitude_sq --------------------------------------------------------------

@pytest.mark.parametrize("i,j", [(i, j) for i in (1, 2, 3) for j in (1, 2, 3)])
def test_golden_magnitudes(i, j):
    assert magnitude_sq(SA, SM[j - 1], i) == pytest.approx(GOLDEN_TABLE[i - 1, j - 1], abs=1e-15)
    assert magnitude_sq_charpoly(SA, SM[j - 1], i) == pytest.approx(GOLDEN_TABLE[i - 1, j - 1], abs=1e-15)


def test_exact_zero_from_coincident_factor():
    assert magnitude_sq(SA, [2.0, 4.0], 3) == 0.0


def test_diagonal_case():
    assert magnitude_sq([1, 2, 3], [2, 3], 1) == 1.0
    assert magnitude_sq_charpoly([1, 2, 3], [2, 3], 1) == pytest.approx(1.0, abs=1e-12)
    assert magnitude_sq([1, 2, 3], [2, 3], 2) == 0.0


def test_scalar_matrix():
    assert magnitude_sq([5.0], [], 1) == 1.0


def test_bad_spectra_rejected():
    with pytest.raises(InterlacingViolation):
        magnitude_sq(SA, [5.0, 6.0], 1)
    with pytest.raises(DimensionMismatch):
        magnitude_sq(SA, [1.0], 1)
    with pytest.raises(DegenerateEigenvalue):
        magnitude_sq([1, 1, 2], [1, 2], 1)
    with pytest.raises(DegenerateEigenvalue):
        magnitude_sq_charpoly([1, 1, 2], [1, 2], 2)


def test_paired_path_is_stable_near_degeneracy():
    # gap 1e-6 between lam_1 and lam_2: naive quotient loses digits, pairing does not
    rng = np.random.default_rng(7)
    from util import random_unitary
    U = random_unitary(rng, 6)
    d = np.array([0.0, 1e-6, 1.0, 2.0, 3.0, 4.0])
    A = U @ np.diag(d) @ U.conj().T
    A = (A + A.conj().T) / 2
    _, ref, _ = oracle_magnitudes(A)
    t = magnitude_table(A)
    assert np.max(np.abs(t.values - ref)) < 1e-7


# -- magnitude_table -------------------------------------------------------------

def test_golden_table():
    t = magnitude_table(GOLDEN_A)
    assert np.max(np.abs(t.values - GOLDEN_TABLE)) <= 1e-12
    assert t.flags[2][0] == MagnitudeFlag.EXACT_ZERO
    assert t.flags[0][0] == MagnitudeFlag.COMPUTED


def test_identity_matrix_is_one_group():
    t = magnitude_table(np.eye(3))
    groups, masses = t.collapsed()
    assert groups == ((1, 2, 3),)
    assert np.array_equal(masses, np.ones((1, 3)))
    assert all(f == MagnitudeFlag.DEGENERATE for row in t.flags for f in row)


@pytest.mark.parametrize("seed", range(5))
def test_random_table_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    A = simple_hermitian(rng, 7)
    _, ref, _ = oracle_magnitudes(A)
    t = magnitude_table(A)
    assert np.max(np.abs(t.values - ref)) <= 1e-8
    assert np.max(np.abs(t.values.sum(axis=0) - 1)) <= 1e-8 * 7
    assert np.max(np.abs(t.values.sum(axis=1) - 1)) <= 1e-8 * 7


def test_threads_are_deterministic(rng):
    A = simple_hermitian(rng, 9)
    serial = magnitude_table(A)
    threaded = magnitude_table(A, threads=4)
    assert np.array_equal(serial.values, threaded.values)
    for a, b in zip(minor_spectra(A), minor_spectra(A, threads=3)):
        assert np.array_equal(a, b)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_table_sums_with_degeneracies(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    A, _ = planted_double(rng, n)
    t = magnitude_table(A)
    assert np.max(np.abs(t.values.sum(axis=0) - 1)) <= 1e-8 * n
    groups, masses = t.collapsed()
    assert np.max(np.abs(masses.sum(axis=1) - [len(g) for g in groups])) <= 1e-7 * n


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_raw_magnitudes_within_unit_interval(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 10))
    A = simple_hermitian(rng, n, rel_gap=1e-2)
    sA = eigvalsh(A)
    for j, sM in enumerate(minor_spectra(A), start=1):
        for i in range(1, n + 1):
            raw = magnitude_sq_charpoly(sA, sM, i)
            assert -1e-7 <= raw <= 1 + 1e-7


@given(seeds, st.floats(-50, 50), st.floats(0.01, 100))
@settings(max_examples=30, deadline=None)
def test_shift_scale_permutation_metamorphics(seed, c, s):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    A = simple_hermitian(rng, n)
    base = magnitude_table(A).values
    I = np.eye(n)
    assert np.max(np.abs(magnitude_table(A + c * I).values - base)) <= 1e-9
    assert np.max(np.abs(magnitude_table(s * A).values - base)) <= 1e-9
    perm = rng.permutation(n)
    P = I[perm]
    permuted = magnitude_table(P @ A @ P.T).values
    assert np.max(np.abs(permuted - base[:, perm])) <= 1e-9


# -- degenerate groups -----------------------------------------------------------

def test_group_mass_diagonal_example():
    assert magnitude_group([1, 1, 2], [1, 2], (1, 2)) == pytest.approx(1.0)
    assert magnitude_group([1, 1, 2], [1, 1], (1, 2)) == pytest.approx(0.0)


@pytest.mark.parametrize("i,j", [(1, 1), (2, 3), (3, 2)])
def test_group_of_one_is_magnitude_sq(i, j):
    assert magnitude_group(SA, SM[j - 1], (i,)) == magnitude_sq(SA, SM[j - 1], i)


@pytest.mark.parametrize("seed", range(5))
def test_planted_double_group_mass(seed):
    rng = np.random.default_rng(seed)
    A, pair = planted_double(rng, 5)
    _, ref, _ = oracle_magnitudes(A)
    sA = eigvalsh(A)
    for j, sM in enumerate(minor_spectra(A), start=1):
        mass = magnitude_group(sA, sM, pair)
        assert mass == pytest.approx(ref[pair[0] - 1, j - 1] + ref[pair[1] - 1, j - 1], abs=1e-7)
        with pytest.raises(DegenerateEigenvalue):
            magnitude_sq(sA, sM, pair[0])
        # a repeated eigenvalue of A is always an eigenvalue of every minor
        scale = max(1.0, np.max(np.abs(sA)))
        lam = sA[pair[0] - 1]
        assert abs(char_poly_eval(sM, lam)) <= 1e-8 * scale ** (A.shape[0] - 1)


def test_group_misuse():
    with pytest.raises(ValueError):
        magnitude_group([1, 1, 2], [1, 2], (1, 3))
    with pytest.raises(InterlacingViolation):
        magnitude_group([1, 1, 2], [1.5, 2], (1, 2))


# -- cross terms -------------------------------------------------------------------

def test_golden_cross_terms():
    assert cross_term(GOLDEN_A, SA, 1, 1, 2).value == pytest.approx(-1 / 3, abs=1e-12)
    d = cross_term(GOLDEN_A, SA, 1, 1, 1).value
    assert d.imag == 0 and d.real == pytest.approx(2 / 3, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_cross_terms_against_oracle(seed):
    rng = np.random.default_rng(seed)
    A = simple_hermitian(rng, 5)
    sA, _, V = oracle_magnitudes(A)
    for i in range(1, 6):
        for j in range(1, 6):
            for jp in range(1, 6):
                c = cross_term(A, sA, i, j, jp).value
                assert c == pytest.approx(V[j - 1, i - 1] * V[jp - 1, i - 1].conj(), abs=1e-8)
                assert abs(c - cross_term(A, sA, i, jp, j).value.conjugate()) <= 1e-10


def test_cross_term_needs_simple_eigenvalue():
    with pytest.raises(DegenerateEigenvalue):
        cross_term(np.eye(3), [1, 1, 1], 2, 1, 2)


# -- alternate form ----------------------------------------------------------------

def test_block_split_round_trip(rng):
    A = simple_hermitian(rng, 5)
    for j in range(1, 6):
        split = BlockSplit.of(A, j)
        assert np.array_equal(split.M1, core.principal_minor(A, j))
        assert np.array_equal(split.assemble(), A)


def test_alternate_golden():
    assert magnitude_alternate(GOLDEN_A, 0.0, 1) == pytest.approx(2 / 3, abs=1e-14)
    with pytest.raises(SingularShift):
        magnitude_alternate(GOLDEN_A, 4.0, 1)


@pytest.mark.parametrize("seed", range(5))
def test_alternate_matches_identity(seed):
    rng = np.random.default_rng(seed)
    A = simple_hermitian(rng, 6)
    sA = eigvalsh(A)
    minors = minor_spectra(A)
    for i in range(1, 7):
        for j in range(1, 7):
            expected = magnitude_sq(sA, minors[j - 1], i)
            assert magnitude_alternate(A, sA[i - 1], j) == pytest.approx(expected, abs=1e-8)


# -- tridiagonal (Paige) -----------------------------------------------------------

T2 = SymmetricTridiagonal([0.0, 0.0], [1.0])


def test_paige_recurrence_examples():
    assert paige_char_recurrence(T2, 1, 1, 3.0) == 1.0
    assert paige_char_recurrence(T2, 0, 2, 1.0) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_paige_recurrence_against_lu(seed):
    rng = np.random.default_rng(seed)
    T = SymmetricTridiagonal(rng.normal(size=8), rng.normal(size=7))
    lam = float(rng.normal())
    ref = core.determinant(lam * np.eye(8) - T.dense()).real
    assert paige_char_recurrence(T, 0, 8, lam) == pytest.approx(ref, rel=1e-9)
    inner = core.determinant(lam * np.eye(4) - T.dense()[2:6, 2:6]).real
    assert paige_char_recurrence(T, 2, 6, lam) == pytest.approx(inner, rel=1e-9)


def test_paige_two_by_two():
    assert paige_magnitude(T2, [-1, 1], 2, 1) == pytest.approx(0.5)
    assert paige_cross(T2, [-1, 1], 2, 1, 2) == pytest.approx(0.5)
    assert paige_cross(T2, [-1, 1], 1, 1, 2) == pytest.approx(-0.5)


def test_paige_on_tridiagonalized_golden_matrix():
    T, _ = tridiagonalize(GOLDEN_A)
    sT = eigvalsh(T.dense())
    table = magnitude_table(T.dense()).values
    got = np.array([[paige_magnitude(T, sT, i, r) for r in (1, 2, 3)] for i in (1, 2, 3)])
    assert np.max(np.abs(got - table)) <= 1e-10


@pytest.mark.parametrize("seed", range(8))
def test_paige_against_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 16))
    T = random_tridiagonal(rng, n)
    sT, mags, V = oracle_magnitudes(T.dense())
    for i in range(1, n + 1):
        row = np.array([paige_magnitude(T, sT, i, r) for r in range(1, n + 1)])
        assert np.max(np.abs(row - mags[i - 1])) <= 1e-8
        assert row.sum() == pytest.approx(1, abs=1e-8)
        for r in range(1, n):
            for s in range(r + 1, n + 1):
                c = paige_cross(T, sT, i, r, s)
                assert c == pytest.approx((V[r - 1, i - 1] * V[s - 1, i - 1]).real, abs=1e-8)
                assert c * c <= row[r - 1] * row[s - 1] + 1e-10
