"""Exact state-space enumeration: transition matrices, spectra, certificates."""

from .chain import ChainMatrix, ChainMatrixError, RowSumExceededError
from .matrices import (
    DEFAULT_CAP,
    build_dual_matrix,
    build_flip_matrices,
    build_hb_matrix,
    build_modified_sw_matrix,
    build_Q_matrix,
    build_Qtilde_matrix,
    build_restricted_hb_matrix,
    build_sw_matrix,
    build_sw_rc_matrix,
    build_T_matrix,
    build_Tstar_matrix,
    pinned_states,
    shift_colors,
)
from .spectral import (
    ConvergenceError,
    SpectrumResult,
    dirichlet_form,
    eigenfunctions,
    jacobi_eigh,
    spectral_gap,
    variance,
)
from .verify import (
    ComparisonConstants,
    pinned_conditional,
    verify_duality,
    verify_gap_equality,
    verify_lemma_spanning,
    verify_lemma_vertex,
    verify_prop_modified,
    verify_theorem_main,
    verify_theorem_main_prime,
    verify_tree_gap,
)

__all__ = [
    "ChainMatrix",
    "ChainMatrixError",
    "RowSumExceededError",
    "DEFAULT_CAP",
    "build_dual_matrix",
    "build_flip_matrices",
    "build_hb_matrix",
    "build_modified_sw_matrix",
    "build_Q_matrix",
    "build_Qtilde_matrix",
    "build_restricted_hb_matrix",
    "build_sw_matrix",
    "build_sw_rc_matrix",
    "build_T_matrix",
    "build_Tstar_matrix",
    "pinned_states",
    "shift_colors",
    "ConvergenceError",
    "SpectrumResult",
    "dirichlet_form",
    "eigenfunctions",
    "jacobi_eigh",
    "spectral_gap",
    "variance",
    "ComparisonConstants",
    "pinned_conditional",
    "verify_duality",
    "verify_gap_equality",
    "verify_lemma_spanning",
    "verify_lemma_vertex",
    "verify_prop_modified",
    "verify_theorem_main",
    "verify_theorem_main_prime",
    "verify_tree_gap",
]
