"""Functions of a spectrum: characteristic polynomials in product form,
derivatives at a root, elementary symmetric polynomials and clustering of
repeated eigenvalues.
"""
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, ValidationError

GROUP_RTOL = 1e-8


def default_tol(s):
    """Multiplicity tolerance ``1e-8 * max(1, spread)``."""
    s = np.asarray(s, dtype=float)
    spread = float(s[-1] - s[0]) if s.size else 0.0
    return GROUP_RTOL * max(1.0, spread)


def char_poly_eval(s, lam):
    """``prod_k (lam - s_k)``; the empty spectrum gives 1."""
    s = np.asarray(s, dtype=float)
    if s.size == 0:
        return 1.0 + 0j
    return complex(np.prod(lam - s.astype(complex)))


def char_poly_derivative_at(s, i):
    """``p'(s_i) = prod_{k != i} (s_i - s_k)`` for 1-based ``i``."""
    s = np.asarray(s, dtype=float)
    if not 1 <= i <= s.size:
        raise IndexOutOfRange(f"eigenvalue index {i} outside 1..{s.size}")
    lam = s[i - 1]
    return float(np.prod(lam - np.delete(s, i - 1)))


def char_poly_derivative(s, lam):
    """``p'(lam) = sum_i prod_{k != i} (lam - s_k)`` at an arbitrary point."""
    s = np.asarray(s, dtype=float)
    return complex(sum(np.prod(lam - np.delete(s, i).astype(complex)) for i in range(s.size)))


def elementary_symmetric(s, k):
    """k-th elementary symmetric polynomial of the values in ``s``.

    Built from the coefficients of ``prod_i (x + s_i)`` one factor at a time.
    """
    s = np.asarray(s, dtype=float)
    if not 0 <= k <= s.size:
        raise IndexOutOfRange(f"k={k} outside 0..{s.size}")
    return float(_esp_all(s)[k])


def _esp_all(s):
    c = np.zeros(s.size + 1)
    c[0] = 1.0
    for m, lam in enumerate(s, start=1):
        c[1:m + 1] = c[1:m + 1] + lam * c[0:m]
    return c


@dataclass(frozen=True)
class MultiplicityGrouping:
    """Partition of 1-based spectrum indices into runs of near-equal values."""

    groups: tuple
    representatives: tuple
    tol: float

    def group_of(self, i):
        for g, members in enumerate(self.groups):
            if i in members:
                return g
        raise IndexOutOfRange(f"index {i} not in grouping")

    def is_simple(self, i):
        return len(self.groups[self.group_of(i)]) == 1

    @property
    def has_repeats(self):
        return any(len(g) > 1 for g in self.groups)


def group_multiplicities(s, tol=None):
    """Greedy left-to-right clustering of a sorted spectrum.

    A value joins the current group when it lies within ``tol`` of the
    previous value, so chains of close values form one group. The
    representative of a group is the mean of its members.
    """
    s = np.asarray(s, dtype=float)
    if tol is None:
        tol = default_tol(s)
    if tol <= 0:
        raise ValidationError("grouping tolerance must be positive")
    groups, current = [], []
    for idx in range(s.size):
        if current and s[idx] - s[idx - 1] > tol:
            groups.append(tuple(current))
            current = []
        current.append(idx + 1)
    if current:
        groups.append(tuple(current))
    reps = tuple(float(np.mean(s[[m - 1 for m in g]])) for g in groups)
    return MultiplicityGrouping(tuple(groups), reps, float(tol))
