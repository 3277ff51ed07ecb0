"""Numerical laboratory for quantum soft covering.

Renyi information quantities of classical-quantum sources, covering error
exponents, one-shot and finite-n trace-distance bounds, and exact or Monte
Carlo simulation of random codebooks.  All logarithms are natural.
"""
from .codebooks import (
    Codebook,
    ExpectationEstimate,
    TypeClassBracket,
    canonical_sequence,
    cc_reference_state,
    composition,
    empirical_distribution,
    enumerate_type_class,
    exact_expected_td,
    induced_state,
    mc_expected_td,
    sample_cc_codebook,
    sample_iid_codebook,
    stirling_constant,
    type_class_probability,
    type_class_size,
)
from .divergences import (
    DivergenceValue,
    petz_renyi,
    relative_entropy,
    relative_entropy_variance,
    sandwiched_renyi,
)
from .errors import BoundViolationError, SoftcoverError, SolverError, ValidationError
from .exponents import (
    BoundRecord,
    ModerateRow,
    achievability_exponent_cc,
    achievability_exponent_iid,
    bounds_at_m,
    moderate_deviation_scan,
    nshot_bounds,
    one_shot_achievability_bound,
    one_shot_sc_bound,
    sc_exponent_cc,
    sc_exponent_iid,
)
from .hermitian import (
    DensityOperator,
    eigh,
    helstrom_value,
    matrix_log,
    matrix_power,
    schatten_norm,
    trace_distance,
)
from .info import (
    InfoResult,
    SolverConfig,
    bloch_grid_oracle,
    classical_sibson_closed_form,
    petz_down_augustin_info,
    petz_down_renyi_info,
    sandwiched_augustin_info,
    sandwiched_renyi_info,
)
from .kernels import HAS_NUMBA, USING_NUMBA, backend_name
from .modelfile import load_model, parse_model
from .sources import (
    CqSource,
    joint_state,
    marginal,
    mutual_information,
    product_source,
    variances,
)
from .theta import OperatorField, lp_norm, theta_apply, theta_norm_bound, verify_theta_bound

__version__ = "0.1.0"

__all__ = [
    "BoundRecord",
    "BoundViolationError",
    "Codebook",
    "CqSource",
    "DensityOperator",
    "DivergenceValue",
    "ExpectationEstimate",
    "HAS_NUMBA",
    "InfoResult",
    "ModerateRow",
    "OperatorField",
    "SoftcoverError",
    "SolverConfig",
    "SolverError",
    "TypeClassBracket",
    "USING_NUMBA",
    "ValidationError",
    "achievability_exponent_cc",
    "achievability_exponent_iid",
    "backend_name",
    "bloch_grid_oracle",
    "bounds_at_m",
    "canonical_sequence",
    "cc_reference_state",
    "classical_sibson_closed_form",
    "composition",
    "eigh",
    "empirical_distribution",
    "enumerate_type_class",
    "exact_expected_td",
    "helstrom_value",
    "induced_state",
    "joint_state",
    "load_model",
    "lp_norm",
    "marginal",
    "matrix_log",
    "matrix_power",
    "mc_expected_td",
    "moderate_deviation_scan",
    "mutual_information",
    "nshot_bounds",
    "one_shot_achievability_bound",
    "one_shot_sc_bound",
    "parse_model",
    "petz_down_augustin_info",
    "petz_down_renyi_info",
    "petz_renyi",
    "product_source",
    "relative_entropy",
    "relative_entropy_variance",
    "sample_cc_codebook",
    "sample_iid_codebook",
    "sandwiched_augustin_info",
    "sandwiched_renyi",
    "sandwiched_renyi_info",
    "sc_exponent_cc",
    "sc_exponent_iid",
    "schatten_norm",
    "stirling_constant",
    "theta_apply",
    "theta_norm_bound",
    "trace_distance",
    "type_class_probability",
    "type_class_size",
    "variances",
    "verify_theta_bound",
]
