"""nhskin: skin-effect diagnostics for 1D non-reciprocal lattice chains.

Builds the doubled (particle/hole) chain with asymmetric hopping, real
pairing and an optional period-3 onsite potential; tests combined
reflection symmetries as a criterion for whether bulk states pile up at
the boundary; and cross-checks the verdict with dense-diagonalization
diagnostics, the complex decay-factor (beta) analysis of bulk states,
band geometric phases, and a finite-chain boundary determinant.
"""

from .model import ModelSpec, OBC, PBC, build_bdg, build_single_particle, validate_spec
from .symmetry import (
    SymmetryOp,
    Verdict,
    build_combined,
    build_reflection,
    commutator_residual,
    default_candidates,
    is_reducible,
    ring_candidates,
    theorem_verdict,
    verify_reflection_structure,
)
from .spectra import (
    EigenSystem,
    SkinReport,
    classify_states,
    density_profile,
    eigendecompose,
    negation_distance,
    pbc_spectrum,
    skin_metrics,
    spectral_winding,
)
from .nonbloch import (
    BetaQuartet,
    ZakResult,
    band_energies,
    bloch_matrix,
    char_poly_residual,
    continuum_condition,
    gbz_modulus_report,
    solve_beta,
    zak_phase,
)
from .boundary import (
    BoundaryCoeffs,
    boundary_coeffs,
    boundary_determinant,
    boundary_matrix,
    continuum_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "ModelSpec", "OBC", "PBC", "build_bdg", "build_single_particle",
    "validate_spec",
    "SymmetryOp", "Verdict", "build_combined", "build_reflection",
    "commutator_residual", "default_candidates", "is_reducible",
    "ring_candidates", "theorem_verdict", "verify_reflection_structure",
    "EigenSystem", "SkinReport", "classify_states", "density_profile",
    "eigendecompose", "negation_distance", "pbc_spectrum", "skin_metrics",
    "spectral_winding",
    "BetaQuartet", "ZakResult", "band_energies", "bloch_matrix",
    "char_poly_residual", "continuum_condition", "gbz_modulus_report",
    "solve_beta", "zak_phase",
    "BoundaryCoeffs", "boundary_coeffs", "boundary_determinant",
    "boundary_matrix", "continuum_ratio",
]
