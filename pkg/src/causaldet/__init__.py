"""Causal-influence bounds under limited detection efficiency."""

from .distcore import (
    BellDistribution,
    CausalDistribution,
    DetectionEfficiency,
    ace,
    apply_efficiency,
    causal_from_bell,
    causal_to_bell,
    do_from_bell,
    is_nonsignaling,
    validate,
)
from .inequalities import InequalityId, InequalitySpec, XiUndefinedError, evaluate_rhs, violation
from .classical import DeterministicStrategy, StrategyMixture, audit_bound, enumerate_strategies
from .quantum import REFERENCE_OPTIMUM, QubitCorrelationParams, correlation_from_params, optimize_violation
from .nonsignaling import canonical_ns, ns_max_violation
from .thresholds import ThresholdRecord, closed_form_table, threshold_bisect, witness_curve

__version__ = "0.1.0"

__all__ = [
    "BellDistribution", "CausalDistribution", "DetectionEfficiency", "ace", "apply_efficiency",
    "causal_from_bell", "causal_to_bell", "do_from_bell", "is_nonsignaling", "validate",
    "InequalityId", "InequalitySpec", "XiUndefinedError", "evaluate_rhs", "violation",
    "DeterministicStrategy", "StrategyMixture", "audit_bound", "enumerate_strategies",
    "REFERENCE_OPTIMUM", "QubitCorrelationParams", "correlation_from_params", "optimize_violation",
    "canonical_ns", "ns_max_violation",
    "ThresholdRecord", "closed_form_table", "threshold_bisect", "witness_curve",
]
