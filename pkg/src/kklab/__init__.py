"""kklab: momentum dynamics of damped, stochastically driven sech^2 solitons.

A numerical laboratory around one traveling-wave family of the fifth-order
Kaup-Kupershmidt flow: the closed-form momentum bookkeeping and its audit,
the damped Riccati dynamics of the momentum parameter (exact, perturbative,
and RK4), white-noise driving with Ito/Stratonovich Monte Carlo ensembles,
a Fourier pseudospectral solver with exact momentum-balance diagnostics,
and the reduction of the momentum flow to Painleve II with validated
reference solutions.
"""

__version__ = "0.1.0"

from .io import (
    SNAPSHOT_MAGIC,
    SchemaError,
    format_float,
    read_csv_table,
    read_snapshot,
    write_json,
    write_snapshot,
    write_table,
)
from .numerics import RunningMoments, rk4_solve, rk4_step
from .painleve import (
    INDUCED_DELTA,
    PainleveProblem,
    PiiSolution,
    PoleError,
    SingularScalingError,
    airy_type_solution,
    pii_exact_rational,
    pii_residual,
    reduce_to_pii,
    solve_pii,
    yablonskii_vorobev,
)
from .riccati import (
    BlowupError,
    ExpansionOutOfRangeWarning,
    FiniteTimeSingularityError,
    RiccatiModel,
    damping_fixed_point,
    riccati_closed_form,
    riccati_perturbative,
    riccati_rhs,
    solve_riccati_numeric,
)
from .soliton import (
    DiscrepancyEntry,
    MomentumAudit,
    RealAmplitudeError,
    SolitonParams,
    UnsupportedOrderError,
    audit_momentum_derivation,
    cubic_flux_quadrature,
    gradient_norm_quadrature,
    momentum_closed_form,
    sech_moment,
    soliton_momentum_quadrature,
    soliton_profile,
)
from .spectral import (
    Diagnostics,
    DivergedStateError,
    Grid,
    PdeConfig,
    PdeState,
    PdeTrajectory,
    PhaseResolutionWarning,
    kk_rhs,
    momentum_balance_residual,
    run_pde,
    spectral_derivative,
    step,
    traveling_wave_residual,
)
from .stochastic import (
    DegenerateEnsembleError,
    EnsembleStats,
    LinearizedRegimeWarning,
    MomentBreakdownWarning,
    NoiseModel,
    SdePath,
    ensemble_moments,
    integrate_sde,
    sample_path,
    second_moment_closed_form,
    second_moment_linearized,
)

__all__ = [
    "__version__",
    # soliton
    "SolitonParams",
    "soliton_profile",
    "sech_moment",
    "soliton_momentum_quadrature",
    "gradient_norm_quadrature",
    "cubic_flux_quadrature",
    "momentum_closed_form",
    "audit_momentum_derivation",
    "MomentumAudit",
    "DiscrepancyEntry",
    "RealAmplitudeError",
    "UnsupportedOrderError",
    # riccati
    "RiccatiModel",
    "riccati_rhs",
    "solve_riccati_numeric",
    "riccati_closed_form",
    "riccati_perturbative",
    "damping_fixed_point",
    "BlowupError",
    "FiniteTimeSingularityError",
    "ExpansionOutOfRangeWarning",
    # stochastic
    "NoiseModel",
    "SdePath",
    "EnsembleStats",
    "sample_path",
    "integrate_sde",
    "ensemble_moments",
    "second_moment_closed_form",
    "second_moment_linearized",
    "DegenerateEnsembleError",
    "MomentBreakdownWarning",
    "LinearizedRegimeWarning",
    # spectral
    "Grid",
    "PdeState",
    "PdeConfig",
    "PdeTrajectory",
    "Diagnostics",
    "kk_rhs",
    "step",
    "run_pde",
    "momentum_balance_residual",
    "spectral_derivative",
    "traveling_wave_residual",
    "DivergedStateError",
    "PhaseResolutionWarning",
    # painleve
    "PainleveProblem",
    "reduce_to_pii",
    "solve_pii",
    "pii_residual",
    "pii_exact_rational",
    "yablonskii_vorobev",
    "airy_type_solution",
    "INDUCED_DELTA",
    "PoleError",
    "SingularScalingError",
    # numerics
    "rk4_step",
    "rk4_solve",
    "RunningMoments",
    # io
    "SchemaError",
    "format_float",
    "write_table",
    "read_csv_table",
    "write_json",
    "write_snapshot",
    "read_snapshot",
    "SNAPSHOT_MAGIC",
]
