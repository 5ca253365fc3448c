"""Exact tail-dependence calculus for max-stable vectors.

Subset-indexed coefficient algebra with exact inversions, max-stable model
synthesis and simulation, exceedance-set limit laws, spectral-distance cut
decompositions with line-metric structure, and exact LP-based realizability
deciders with verifiable certificates.
"""

from .coeffs import (
    Kind,
    SubsetFn,
    TdMatrix,
    beta_from_lambda,
    beta_from_theta,
    lambda_from_beta,
    lambda_from_theta,
    lambda_violations,
    linear_combination,
    td_matrix,
    theta_from_beta,
    theta_from_lambda,
    theta_violations,
)
from .rationals import Rat, rat, rat_str
from .realize import (
    FeasibilityOutcome,
    Status,
    decide_sdr,
    decide_tdr,
    normalize_sdr_to_tdr,
    verify_certificate,
)
from .spectral import (
    CutDecomposition,
    LineMetricCert,
    LineTmModel,
    NotLine,
    NotRealizableAtTheseMarginals,
    SemiMetric,
    cut_decomposition,
    detect_line_metric,
    distance_from_td,
    higher_order_from_line,
    line_tm_model,
    rigidity_probe,
    validate,
)
from .simulate import (
    SimConfig,
    estimate_lambda,
    estimate_theta,
    estimation_report,
    exceedance_set_histogram,
    max_stability_check,
    max_stability_exponent_identity,
    sample,
    sample_config,
    tv_distance,
)
from .subsets import labels_of, mask_of
from .tm import (
    BernoulliTensor,
    ExceedanceSetDist,
    RealizabilityFailure,
    TmModel,
    cdf,
    cdf_exponent,
    exact_joint_exceedance,
    exact_union_exceedance,
    exceedance_set_dist,
    model_from_bernoulli,
    synthesize,
    tensor_from_model,
)

spectral_distance = distance_from_td

__version__ = "0.1.0"

__all__ = [
    "Kind",
    "SubsetFn",
    "TdMatrix",
    "Rat",
    "rat",
    "rat_str",
    "mask_of",
    "labels_of",
    "lambda_from_beta",
    "theta_from_beta",
    "beta_from_lambda",
    "beta_from_theta",
    "theta_from_lambda",
    "lambda_from_theta",
    "lambda_violations",
    "theta_violations",
    "linear_combination",
    "td_matrix",
    "TmModel",
    "RealizabilityFailure",
    "synthesize",
    "cdf",
    "cdf_exponent",
    "exact_joint_exceedance",
    "exact_union_exceedance",
    "ExceedanceSetDist",
    "exceedance_set_dist",
    "BernoulliTensor",
    "tensor_from_model",
    "model_from_bernoulli",
    "SemiMetric",
    "validate",
    "distance_from_td",
    "spectral_distance",
    "CutDecomposition",
    "cut_decomposition",
    "LineMetricCert",
    "NotLine",
    "detect_line_metric",
    "NotRealizableAtTheseMarginals",
    "LineTmModel",
    "line_tm_model",
    "higher_order_from_line",
    "rigidity_probe",
    "Status",
    "FeasibilityOutcome",
    "decide_tdr",
    "decide_sdr",
    "normalize_sdr_to_tdr",
    "verify_certificate",
    "SimConfig",
    "sample",
    "sample_config",
    "estimate_lambda",
    "estimate_theta",
    "estimation_report",
    "exceedance_set_histogram",
    "tv_distance",
    "max_stability_check",
    "max_stability_exponent_identity",
]
