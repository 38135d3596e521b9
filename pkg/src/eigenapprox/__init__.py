"""Spectral toolkit for fractional power spaces of the (Stokes/)Laplacian:
damped truncation operators, real-interpolation norms, operator-norm
experiments, and a desk-scale CBF solver with an energy-equality ledger.
"""

from .approx import (
    SmoothingParams,
    apply_fractional_power,
    c_gamma,
    cubic_truncate,
    fractional_norm,
    phi,
    pi_theta,
    pi_theta_error_norm,
    pi_theta_gap_norm,
    semigroup_apply,
    semigroup_error_norm,
    smoothing_bound,
    spherical_truncate,
)
from .cbf import (
    CBFParams,
    CBFState,
    EnergyLedger,
    MollifierSpec,
    Trajectory,
    cbf_rhs,
    energy_ledger,
    from_spectral_field,
    load_trajectory,
    random_divergence_free_state,
    save_trajectory,
    simulate,
    space_mollify,
    state_divergence_residual,
    state_energy,
    state_enstrophy,
    step,
    taylor_green,
    time_mollify,
    to_spectral_field,
)
from .domains import (
    Box,
    DirichletLaplacian,
    EigenPair,
    Interval,
    ModeIndex,
    Torus,
    TorusLaplacian,
    TorusStokes,
    enumerate_modes,
    mode_evaluator,
)
from .errors import AccuracyError, AliasingError, ConfigError, ResourceLimitError, ToolkitError
from .fields import (
    GridField,
    SpectralField,
    add,
    analyze,
    conjugate_symmetry_violation,
    divergence_residual,
    leray_project,
    lp_norm,
    random_field,
    scale,
    subtract,
    synthesize,
    uniform_axes,
)
from .interpolation import (
    BoundaryWeight,
    H00Report,
    InterpolationQuery,
    h00_weighted_norm,
    i_theta,
    i_theta_quadrature,
    interpolation_norm,
    k_functional,
    reiteration_check,
)
from .normlab import (
    ExperimentConfig,
    apply_named_transform,
    convergence_study,
    lp_ratio,
    operator_norm_lower_bound,
    sample_fields,
    sobolev_equivalence_study,
    sobolev_surrogate_norm,
    truncation_experiment,
)
from .reports import NormReport, write_reports_csv, write_table_csv
from .serialize import (
    grid_field_from_csv,
    grid_field_to_csv,
    spectral_field_from_csv,
    spectral_field_to_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "AliasingError",
    "BoundaryWeight",
    "Box",
    "CBFParams",
    "CBFState",
    "ConfigError",
    "DirichletLaplacian",
    "EigenPair",
    "EnergyLedger",
    "ExperimentConfig",
    "GridField",
    "H00Report",
    "Interval",
    "InterpolationQuery",
    "ModeIndex",
    "MollifierSpec",
    "NormReport",
    "ResourceLimitError",
    "SmoothingParams",
    "SpectralField",
    "ToolkitError",
    "Torus",
    "TorusLaplacian",
    "TorusStokes",
    "Trajectory",
    "add",
    "analyze",
    "apply_fractional_power",
    "apply_named_transform",
    "c_gamma",
    "cbf_rhs",
    "conjugate_symmetry_violation",
    "convergence_study",
    "cubic_truncate",
    "divergence_residual",
    "energy_ledger",
    "enumerate_modes",
    "fractional_norm",
    "from_spectral_field",
    "grid_field_from_csv",
    "grid_field_to_csv",
    "h00_weighted_norm",
    "i_theta",
    "i_theta_quadrature",
    "interpolation_norm",
    "k_functional",
    "leray_project",
    "load_trajectory",
    "lp_norm",
    "lp_ratio",
    "mode_evaluator",
    "operator_norm_lower_bound",
    "phi",
    "pi_theta",
    "pi_theta_error_norm",
    "pi_theta_gap_norm",
    "random_divergence_free_state",
    "random_field",
    "reiteration_check",
    "sample_fields",
    "save_trajectory",
    "scale",
    "semigroup_apply",
    "semigroup_error_norm",
    "simulate",
    "smoothing_bound",
    "sobolev_equivalence_study",
    "sobolev_surrogate_norm",
    "space_mollify",
    "spectral_field_from_csv",
    "spectral_field_to_csv",
    "spherical_truncate",
    "state_divergence_residual",
    "state_energy",
    "state_enstrophy",
    "step",
    "subtract",
    "synthesize",
    "taylor_green",
    "time_mollify",
    "to_spectral_field",
    "truncation_experiment",
    "uniform_axes",
    "write_reports_csv",
    "write_table_csv",
]
