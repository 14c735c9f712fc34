"""Sharp bounds and dominance analysis for covariate-based treatment rules.

Given a covariate distribution for a population and the covariate-blind
outcome rates of a randomized experiment, this package computes the exact
identified interval for the mean outcome of every rule mapping covariates to
treatments, partitions the rules into dominated and undominated sets, selects
the maximin rule, benchmarks against full knowledge of the joint response
model, and certifies every closed form against a brute-force vertex oracle.

All probability arithmetic is exact (rational numbers); floats appear only in
rendered output.
"""

from rulebounds.bounds import (
    BinaryCaseId,
    binary_case_bounds,
    classify_binary_case,
    rule_value_bounds,
)
from rulebounds.distributions import (
    JOINT_TOLERANCE,
    RULE_ENUMERATION_CAP,
    SIMPLEX_TOLERANCE,
    CovariateDistribution,
    CovariateSpace,
    ExperimentalMarginals,
    Interval,
    JointResponseModel,
    Scenario,
    TreatmentRule,
    TreatmentSet,
    as_probability,
    enumerate_rules,
    marginalize_joint,
    true_rule_value,
    validate_scenario,
)
from rulebounds.dominance import (
    DominanceReport,
    PairRelation,
    RuleAnalysis,
    dominance_partition,
    gap_witness,
    max_gap,
    maximin_rule,
    relate,
)
from rulebounds.errors import (
    CaseMismatchError,
    DuplicateLabelError,
    InconsistentJointError,
    InfeasibleError,
    MissingAssignmentError,
    NonSimplexError,
    NotBinaryError,
    OutOfRangeError,
    ParseError,
    SizeLimitError,
    UnknownLabelError,
    ValidationError,
)
from rulebounds.oracle import (
    FeasibleVertex,
    SharpnessCertificate,
    VertexExtrema,
    sample_consistent_joint,
    verify_dominance,
    verify_sharpness,
    vertex_extremize,
)
from rulebounds.planner import (
    Coarsening,
    JensenComparison,
    coarsen,
    jensen_check,
    optimal_rule,
    worst_case_value,
)
from rulebounds.report import ReportDocument
from rulebounds.scenario_io import loads_scenario, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "BinaryCaseId",
    "CaseMismatchError",
    "Coarsening",
    "CovariateDistribution",
    "CovariateSpace",
    "DominanceReport",
    "DuplicateLabelError",
    "ExperimentalMarginals",
    "FeasibleVertex",
    "InconsistentJointError",
    "InfeasibleError",
    "Interval",
    "JensenComparison",
    "JointResponseModel",
    "JOINT_TOLERANCE",
    "MissingAssignmentError",
    "NonSimplexError",
    "NotBinaryError",
    "OutOfRangeError",
    "PairRelation",
    "ParseError",
    "ReportDocument",
    "RuleAnalysis",
    "RULE_ENUMERATION_CAP",
    "Scenario",
    "SharpnessCertificate",
    "SIMPLEX_TOLERANCE",
    "SizeLimitError",
    "TreatmentRule",
    "TreatmentSet",
    "UnknownLabelError",
    "ValidationError",
    "VertexExtrema",
    "as_probability",
    "binary_case_bounds",
    "classify_binary_case",
    "coarsen",
    "dominance_partition",
    "enumerate_rules",
    "gap_witness",
    "jensen_check",
    "loads_scenario",
    "marginalize_joint",
    "max_gap",
    "maximin_rule",
    "optimal_rule",
    "parse_scenario",
    "relate",
    "rule_value_bounds",
    "sample_consistent_joint",
    "true_rule_value",
    "validate_scenario",
    "verify_dominance",
    "verify_sharpness",
    "vertex_extremize",
    "worst_case_value",
]
