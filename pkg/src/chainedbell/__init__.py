"""Chained Bell measurements and the predictive power of alternative theories.

Simulate and analyze chained-Bell photon experiments, estimate the bound
``delta = I/2 + nu`` on how much any non-signaling alternative theory could
improve on quantum predictions, reconstruct the source state from tomography
data, and evaluate hidden-variable and hidden-polarization models against
measured data.
"""

from __future__ import annotations

from .alttheories import (
    DeterministicStrategy,
    FalsificationResult,
    FiniteConditionalDistribution,
    LeggettHiddenDist,
    LemmaReport,
    NonSignalingCheck,
    case4_grid_check,
    check_nonsignaling,
    falsification_report,
    leggett_critical,
    leggett_expected_distance,
    leggett_outcome,
    lhv_min_chained,
    lhv_mixture,
    markov_violation,
    min_visibility,
    quantum_model,
    tightness_model,
    variational_distance,
    verify_lemma_bound,
)
from .counting import (
    ChainedEstimate,
    GroupCounts,
    GroupEstimate,
    bias_nu,
    chained_I,
    correlated_probability,
    delta_from,
    estimate_chained,
    group_bias,
    mc_uncertainty,
)
from .errors import (
    ChainedBellError,
    DegenerateGroupError,
    IncompleteDataError,
    InvalidInputError,
    ParseError,
    SignalingError,
    UndefinedConditionalError,
    UnderdeterminedError,
)
from .io import (
    RunManifest,
    parse_counts_csv,
    parse_tomo_csv,
    sha256_file,
    write_counts_csv,
    write_tomo_csv,
)
from .qcore import (
    BlochVector,
    DensityMatrix,
    apply_werner_noise,
    correlation,
    fidelity,
    joint_probability,
    maximally_mixed_state,
    phi_plus_ket,
    phi_plus_state,
    projector_from_bloch,
)
from .qsim import (
    DEFAULT_SEED,
    ExperimentConfig,
    SweepRow,
    predicted_chained_value,
    predicted_delta,
    simulate_dataset,
    sweep_delta,
)
from .settings import (
    PLANE_NAMES,
    PLANE_PLUS_H,
    PLANE_PLUS_L,
    ChainedPlan,
    CoincidenceGroup,
    PlaneEmbedding,
    alice_setting,
    bob_setting,
    build_plan,
    plane_by_name,
)
from .tomography import (
    BASIS_LABELS,
    ReconstructionResult,
    TomoDataset,
    TomoRow,
    TomoSetting,
    expected_rate,
    mle_reconstruct,
    reconstruction_report,
    state_overlap,
    synthetic_dataset,
)

__all__ = [
    # errors
    "ChainedBellError", "InvalidInputError", "ParseError", "IncompleteDataError",
    "DegenerateGroupError", "UndefinedConditionalError", "SignalingError",
    "UnderdeterminedError",
    # qcore
    "BlochVector", "DensityMatrix", "phi_plus_ket", "phi_plus_state",
    "maximally_mixed_state", "projector_from_bloch", "joint_probability",
    "correlation", "fidelity", "apply_werner_noise",
    # settings
    "PlaneEmbedding", "PLANE_PLUS_L", "PLANE_PLUS_H", "PLANE_NAMES",
    "plane_by_name", "alice_setting", "bob_setting", "CoincidenceGroup",
    "ChainedPlan", "build_plan",
    # counting
    "GroupCounts", "GroupEstimate", "ChainedEstimate", "correlated_probability",
    "group_bias", "bias_nu", "chained_I", "delta_from", "mc_uncertainty",
    "estimate_chained",
    # qsim
    "DEFAULT_SEED", "ExperimentConfig", "SweepRow", "predicted_delta",
    "predicted_chained_value", "simulate_dataset", "sweep_delta",
    # tomography
    "BASIS_LABELS", "TomoSetting", "TomoRow", "TomoDataset",
    "ReconstructionResult", "expected_rate", "synthetic_dataset",
    "mle_reconstruct", "reconstruction_report", "state_overlap",
    # alttheories
    "FiniteConditionalDistribution", "DeterministicStrategy", "LeggettHiddenDist",
    "NonSignalingCheck", "LemmaReport", "FalsificationResult",
    "variational_distance", "check_nonsignaling", "markov_violation",
    "verify_lemma_bound", "lhv_min_chained", "lhv_mixture", "quantum_model",
    "tightness_model", "leggett_outcome", "leggett_expected_distance",
    "leggett_critical", "min_visibility", "falsification_report",
    "case4_grid_check",
    # io
    "RunManifest", "parse_counts_csv", "write_counts_csv", "parse_tomo_csv",
    "write_tomo_csv", "sha256_file",
]
