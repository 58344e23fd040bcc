"""Kinetics of number-conserving bosons coupled to an engineered
driven-lossy-cavity reservoir: rate-equation evolution to the
non-equilibrium steady state and its deformed Bose-Einstein description."""

from .analysis import (
    ComparisonReport,
    compare_distributions,
    fit_inverse_temperature,
    ground_vs_top,
    kl_divergence,
    kl_ratio,
)
from .config import (
    RunConfig,
    SweepSpec,
    default_sweep_spec,
    parse_config,
    parse_sweep_spec,
    serialize_config,
)
from .errors import (
    BosonKineticsError,
    ConfigError,
    ConvergenceError,
    DegenerateExpansionError,
    DomainError,
    InvalidParameterError,
    OutOfBandError,
    StiffnessError,
    UndefinedDivergenceError,
)
from .kinetics import (
    Occupations,
    RateContext,
    Trajectory,
    build_rate_context,
    early_time_rate,
    evolve,
    find_steady_state,
    rhs,
    steady_state_residual,
    uniform_occupations,
)
from .lattice import (
    Boundary,
    LatticeParams,
    ModeSpectrum,
    band_quadrature,
    build_modes,
    density_of_states,
    overlap_factor,
    overlap_matrix,
)
from .perturbation import (
    PerturbativeSolution,
    bose_einstein,
    continuum_steady_residual,
    deformed_distribution,
    energy_dependent_beta,
    residual_supplemental_odes,
    solve_chemical_potential,
    uniform_limit,
)
from .reservoir import (
    ReservoirParams,
    base_inverse_temperature,
    effective_beta_exact,
    effective_beta_expansion,
    noise_spectrum,
    steady_amplitude_sq,
    stokes_curvature_factor,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
