"""Relative phases of eigenvector components, and whole eigenvectors, from
magnitude data in rotated bases.

Mixing coordinates ``j`` and ``k`` with :func:`core.rotate_pair` sends
component ``j`` of every eigenvector to ``(v_j + w v_k)/sqrt(2)``, whose
squared magnitude is ``(m_j + m_k)/2 + Re(conj(w) v_j conj(v_k))``. The
magnitudes for ``w = 1`` and ``w = i`` therefore give the real and
imaginary parts of ``v_j conj(v_k)``.

Each pair costs two extra minor eigenvalue solves, so a full vector is
O(n^4). This is a demonstration of the identity, not a fast eigensolver.
"""
import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import core
from .eigensolve import as_spectrum, eigvalsh
from .errors import IllConditioned, ValidationError
from .identity import magnitude_sq, minor_spectra
from .spectralfn import default_tol

PHASE_FLOOR = 1e-6


class ComponentFlag(str, enum.Enum):
    OK = "ok"
    EXACT_ZERO = "exact-zero"
    UNDEFINED_PHASE = "undefined-phase"


@dataclass(frozen=True)
class ReconstructedVector:
    i: int
    eigenvalue: float
    components: np.ndarray
    pivot: int
    flags: tuple

    @property
    def norm(self):
        return float(np.linalg.norm(self.components))


def _rotated_magnitude(A, sA, i, j, k, omega, tol):
    B = core.rotate_pair(A, core.RotationSpec(j, k, omega))
    return magnitude_sq(sA, eigvalsh(core.principal_minor(B, j)), i, tol)


def pair_product(A, sA, i, j, k, tol=None, minors=None,
                 phase_floor=PHASE_FLOOR, strict=False):
    """``v_ij * conj(v_ik)`` for ``j != k``.

    If ``|v_ij| |v_ik| < phase_floor`` the phase is not recoverable: the
    function returns ``0`` (the product is below the floor in modulus), or
    raises :class:`IllConditioned` when ``strict`` is set.
    """
    A = core.validate_hermitian(A)
    n = A.shape[0]
    sA = as_spectrum(sA)
    core._check_index(j, n)
    core._check_index(k, n)
    if j == k:
        raise ValidationError("pair_product needs j != k")
    if tol is None:
        tol = default_tol(sA)
    if minors is None:
        mj = magnitude_sq(sA, eigvalsh(core.principal_minor(A, j)), i, tol)
        mk = magnitude_sq(sA, eigvalsh(core.principal_minor(A, k)), i, tol)
    else:
        mj = magnitude_sq(sA, minors[j - 1], i, tol)
        mk = magnitude_sq(sA, minors[k - 1], i, tol)
    if mj * mk < phase_floor ** 2:
        if strict:
            raise IllConditioned(
                f"|v_{i},{j}| |v_{i},{k}| = {np.sqrt(mj * mk):.3e} is below "
                f"the phase floor {phase_floor:g}"
            )
        return 0j
    mean = 0.5 * (mj + mk)
    re = _rotated_magnitude(A, sA, i, j, k, 1.0, tol) - mean
    im = _rotated_magnitude(A, sA, i, j, k, 1j, tol) - mean
    return complex(re, im)


def _pivot_and_magnitudes(A, i, tol, threads):
    sA = eigvalsh(A)
    minors = minor_spectra(A, threads)
    if tol is None:
        tol = default_tol(sA)
    mags = np.array([magnitude_sq(sA, s, i, tol) for s in minors])
    pivot = int(np.argmax(mags)) + 1
    return sA, minors, mags, pivot, tol


def _map(fn, items, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def reconstruct_eigenvector(A, i, tol=None, phase_floor=PHASE_FLOOR, threads=None):
    """Unit eigenvector ``v_i`` up to a global phase.

    The pivot is the largest-magnitude component (lowest index on ties) and
    is returned real and positive. Components smaller than ``phase_floor``
    are returned as their (real) magnitude and flagged.
    """
    A = core.validate_hermitian(A)
    n = A.shape[0]
    sA, minors, mags, pivot, tol = _pivot_and_magnitudes(A, i, tol, threads)
    root = np.sqrt(mags[pivot - 1])
    comps = np.zeros(n, dtype=np.complex128)
    flags = [ComponentFlag.OK] * n
    comps[pivot - 1] = root
    others = [k for k in range(1, n + 1) if k != pivot]

    def component(k):
        if mags[k - 1] == 0.0:
            return 0j, ComponentFlag.EXACT_ZERO
        if np.sqrt(mags[k - 1]) < phase_floor:
            return complex(np.sqrt(mags[k - 1])), ComponentFlag.UNDEFINED_PHASE
        p = pair_product(A, sA, i, pivot, k, tol, minors, phase_floor)
        return p.conjugate() / root, ComponentFlag.OK

    for k, (c, f) in zip(others, _map(component, others, threads)):
        comps[k - 1] = c
        flags[k - 1] = f
    return ReconstructedVector(i, float(sA[i - 1]), comps, pivot, tuple(flags))


def real_symmetric_signs(A, i, tol=None, phase_floor=PHASE_FLOOR):
    """Signs of the components of ``v_i`` relative to the pivot component.

    For a real symmetric matrix the single rotation ``w = 1`` suffices.
    Components below ``phase_floor`` get sign 0.
    """
    A = core.as_matrix(A)
    if np.any(A.imag != 0):
        raise ValidationError("real_symmetric_signs needs a real matrix")
    A = core.validate_hermitian(A.real)
    n = A.shape[0]
    sA, minors, mags, pivot, tol = _pivot_and_magnitudes(A, i, tol, None)
    signs = np.zeros(n, dtype=int)
    signs[pivot - 1] = 1
    for k in range(1, n + 1):
        if k == pivot or np.sqrt(mags[k - 1]) < phase_floor:
            continue
        if np.sqrt(mags[pivot - 1] * mags[k - 1]) < phase_floor:
            continue
        re = _rotated_magnitude(A, sA, i, pivot, k, 1.0, tol) - 0.5 * (mags[pivot - 1] + mags[k - 1])
        signs[k - 1] = 1 if re > 0 else -1
    return signs
