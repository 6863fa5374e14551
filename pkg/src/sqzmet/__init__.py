"""Heisenberg-limited estimation of a weighted phase average with one squeezed probe.

A single squeezed-vacuum source feeds an M-channel linear network whose
first column encodes the probability weights; after the unknown per-channel
phase shifts and the inverse network, undoing the squeezer and checking for
vacuum on every channel yields a survival probability whose small-phase
response carries the weighted phase average.  The package evaluates that
probability with two independent engines (covariance matrices and a
truncated occupation-basis oracle), synthesises the weight-encoding mesh,
and runs shot-level Monte-Carlo sweeps of the estimation variance.
"""

from .gaussian import (
    GaussianState,
    PhotonMoments,
    SqueezeParameter,
    apply_network,
    apply_phases,
    apply_squeeze,
    mean_photon_number,
    photon_moments,
    purity_defect,
    vacuum_overlap_probability,
    vacuum_state,
)
from .network import (
    MeshElement,
    RotationMesh,
    embed_weights_unitary,
    mach_zehnder_unitary,
    mesh_to_netlist,
    parse_netlist,
    reck_decompose,
    recompose,
    unitarity_defect,
    validate_weights,
)
from .fock import (
    FockAmplitudes,
    SurvivalSeries,
    TruncationError,
    TwoModeSectorOperators,
    generator_moments,
    generator_moments_sectors,
    mach_zehnder_factorization_residual,
    photon_moments_fock,
    propagate_through_network,
    recommend_cutoff,
    series_partial_sum,
    squeezed_vacuum_amplitudes,
    survival_probability,
    survival_probability_sectors,
    two_mode_sector_operators,
)
from .metrology import (
    EstimationResult,
    ExperimentConfig,
    PhaseMoments,
    ProtocolRun,
    RegimeCheck,
    RegimeError,
    SweepResult,
    check_regime,
    error_propagation_sensitivity,
    estimate_phase,
    exact_survival_probability,
    generator_variance,
    heisenberg_sensitivity,
    phase_moments,
    run_protocol,
    scaling_sweep,
    simulate_shots,
    survival_probability_large_n,
    survival_probability_quadratic,
    sweep_point_probability,
    sweep_shot_count,
)

__version__ = "0.1.0"

__all__ = [
    "GaussianState",
    "PhotonMoments",
    "SqueezeParameter",
    "apply_network",
    "apply_phases",
    "apply_squeeze",
    "mean_photon_number",
    "photon_moments",
    "purity_defect",
    "vacuum_overlap_probability",
    "vacuum_state",
    "MeshElement",
    "RotationMesh",
    "embed_weights_unitary",
    "mach_zehnder_unitary",
    "mesh_to_netlist",
    "parse_netlist",
    "reck_decompose",
    "recompose",
    "unitarity_defect",
    "validate_weights",
    "FockAmplitudes",
    "SurvivalSeries",
    "TruncationError",
    "TwoModeSectorOperators",
    "generator_moments",
    "generator_moments_sectors",
    "mach_zehnder_factorization_residual",
    "photon_moments_fock",
    "propagate_through_network",
    "recommend_cutoff",
    "series_partial_sum",
    "squeezed_vacuum_amplitudes",
    "survival_probability",
    "survival_probability_sectors",
    "two_mode_sector_operators",
    "EstimationResult",
    "ExperimentConfig",
    "PhaseMoments",
    "ProtocolRun",
    "RegimeCheck",
    "RegimeError",
    "SweepResult",
    "check_regime",
    "error_propagation_sensitivity",
    "estimate_phase",
    "exact_survival_probability",
    "generator_variance",
    "heisenberg_sensitivity",
    "phase_moments",
    "run_protocol",
    "scaling_sweep",
    "simulate_shots",
    "survival_probability_large_n",
    "survival_probability_quadratic",
    "sweep_point_probability",
    "sweep_shot_count",
    "__version__",
]
