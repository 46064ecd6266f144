"""Eigenvector component magnitudes, relative phases and eigenvectors of
Hermitian matrices, computed from eigenvalues of the matrix and its minors.
"""
from .core import (
    RotationSpec,
    adjugate_cofactor,
    determinant,
    general_minor,
    principal_minor,
    rotate_pair,
    validate_hermitian,
)
from .eigensolve import (
    EigenDecomposition,
    SymmetricTridiagonal,
    eigh,
    eigh_jacobi,
    eigvals_tridiag,
    eigvalsh,
    tridiagonalize,
)
from .errors import *  # noqa: F401,F403
from .identity import (
    BlockSplit,
    CrossTerm,
    MagnitudeFlag,
    MagnitudeTable,
    cross_term,
    magnitude_alternate,
    magnitude_group,
    magnitude_sq,
    magnitude_sq_charpoly,
    magnitude_table,
    minor_spectra,
    paige_char_recurrence,
    paige_cross,
    paige_magnitude,
)
from .phase import (
    ComponentFlag,
    ReconstructedVector,
    pair_product,
    real_symmetric_signs,
    reconstruct_eigenvector,
)
from .spectralfn import (
    MultiplicityGrouping,
    char_poly_derivative_at,
    char_poly_eval,
    elementary_symmetric,
    group_multiplicities,
)
from .verify import CheckReport, run_full_suite

__version__ = "0.1.0"
