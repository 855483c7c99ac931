"""Entanglement phase transitions of monitored free-fermion chains.

Exact momentum-space treatment of the no-click limit of two monitored
chains (transverse-field Ising, long-range Kitaev): non-Hermitian
Bogoliubov modes, Gaussian steady states, Majorana correlation matrices,
entanglement scaling diagnostics, rare-jump trajectories, and a dense
brute-force oracle for validation at small sizes.
"""

__version__ = "0.1.0"

from .entropy import (
    EntropyRow,
    LogFit,
    entanglement_entropy,
    entropy_profile,
    fit_log_law,
    incremental_ratio,
    log_coefficient,
    phase_averaged_entropy,
    window_entropy,
)
from .errors import (
    DegenerateModeError,
    InvalidStateError,
    NumericalInstabilityError,
    RegimeError,
    ResourceError,
    SimulationError,
    ZeroOverlapError,
)
from .gaussian_state import (
    CorrelationMatrix,
    ModeAmplitudes,
    SteadyState,
    correlation_functions,
    initial_overlap_amplitudes,
    majorana_correlation,
    mode_correlators,
    occupations,
    steady_state,
    vacuum_state,
)
from .jumps import (
    FixedPoint,
    JumpCoefficients,
    JumpEvent,
    PhaseMode,
    TrajectoryConfig,
    TrajectoryRecord,
    ValidityEstimate,
    apply_jump_map,
    fixed_points,
    jump_coefficients,
    jump_rate,
    jump_rate_from_occupations,
    relaxation_steps,
    run_trajectory,
    sample_waiting_time,
    validity_estimate,
)
from .model import (
    BogoliubovData,
    BoundaryCondition,
    ModeData,
    ModeTable,
    ModelKind,
    ModelParams,
    MomentumGrid,
    SpectrumSummary,
    bloch_block,
    bloch_coefficients,
    bogoliubov,
    clausen_g,
    clausen_g_limit,
    critical_gamma,
    dgamma_dk_at_qstar,
    has_resonant_momentum,
    mode_table,
    momentum_grid,
    quasiparticle_energy,
    smallk_asymptotics,
    spectrum_summary,
)

__all__ = [name for name in dir() if not name.startswith("_")]
