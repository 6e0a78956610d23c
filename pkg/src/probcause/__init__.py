"""Bounds and identification for the probabilities of causation (PN, PS, PNS)
from experimental and observational 2x2 data, with an exact LP oracle."""
from .bounds import (
    AttributionMeasures,
    BoundsReport,
    bounds_combined,
    bounds_experimental,
    bounds_exogenous,
    bounds_observational,
    effect_bounds_monotone,
    evaluate,
    identify_exo_monotone,
    identify_monotone,
    strong_exo_relations,
)
from .model import (
    AssumptionSet,
    CausalEffects,
    CausationMeasures,
    DatasetCounts,
    Interval,
    JointDistribution,
    ResponseProfile,
    causation_of,
    effects_from_counts,
    joint_from_counts,
    lemma1_residual,
    observables_of,
)

__version__ = "0.1.0"
