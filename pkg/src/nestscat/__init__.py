"""Subwavelength resonances of nested high-contrast spherical resonators.

The package computes the resonant frequencies of a scatterer made of N
concentric spherical shells filled with a light, compressible material and
separated by a dense background fluid, and solves the associated plane-wave
scattering problem.  Three characterizations of the resonances are provided
and cross-validated:

* a spherical-wave-expansion determinant (4N x 4N, exact),
* a Dirichlet-to-Neumann reduction (2N x 2N, exact for the n = 0 harmonic),
* a generalized capacitance eigenvalue problem (N x N, leading order in the
  density contrast delta).

The command line front end (``nestscat``) reproduces the standard spectrum,
resonance-sweep, and near-field reports as CSV/JSON plus rendered figures.
"""

from .model import MaterialParams, NestedGeometry, equidistant_geometry
from .numerics import (
    LogDet,
    MullerResult,
    RootFindError,
    SingularMatrixError,
    SymTridiag,
    lu_logdet,
    lu_solve,
    muller_find_root,
    sym_tridiag_eigen,
)
from .special import SphericalPair, sph_bessel_j, sph_hankel1
from .capacitance import (
    CapacitanceSystem,
    asymptotic_frequencies,
    build_capacitance,
    build_volume,
    generalized_eigs,
    solve_capacitance,
)
from .dtn import (
    ExcludedWavenumberError,
    assemble_dtn_system,
    dtn_logdet,
    dtn_matrix,
    dtn_series_term,
    find_resonances_dtn,
)
from .swe import (
    ModeRecord,
    ResonanceSpectrum,
    assemble_swe_system,
    find_resonances_swe,
    make_scaled_det,
    swe_logdet,
)
from .scattering import (
    FarFieldSummary,
    ModalPrediction,
    ScatteringSolution,
    eval_field,
    far_field_monopole,
    field_l2_norm,
    incident_l2_norm,
    modal_prediction,
    monopole_amplitude,
    scattered_field,
    shell_mean_field,
    solve_scattering,
)

__version__ = "0.1.0"

__all__ = [
    "CapacitanceSystem",
    "ExcludedWavenumberError",
    "FarFieldSummary",
    "LogDet",
    "MaterialParams",
    "ModalPrediction",
    "ModeRecord",
    "MullerResult",
    "NestedGeometry",
    "ResonanceSpectrum",
    "RootFindError",
    "ScatteringSolution",
    "SingularMatrixError",
    "SphericalPair",
    "SymTridiag",
    "assemble_dtn_system",
    "assemble_swe_system",
    "asymptotic_frequencies",
    "build_capacitance",
    "build_volume",
    "dtn_logdet",
    "dtn_matrix",
    "dtn_series_term",
    "equidistant_geometry",
    "eval_field",
    "far_field_monopole",
    "field_l2_norm",
    "find_resonances_dtn",
    "find_resonances_swe",
    "generalized_eigs",
    "incident_l2_norm",
    "lu_logdet",
    "lu_solve",
    "make_scaled_det",
    "modal_prediction",
    "monopole_amplitude",
    "muller_find_root",
    "scattered_field",
    "shell_mean_field",
    "solve_capacitance",
    "solve_scattering",
    "sph_bessel_j",
    "sph_hankel1",
    "swe_logdet",
    "sym_tridiag_eigen",
]
