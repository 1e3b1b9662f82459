"""Budget-feasible doctor-hiring mechanisms over a professional social graph.

Two-fold pipeline: fold 1 pays leaders from a hospital budget to maximize
how many doctors hear about an opening (coverage); fold 2 hires from the
leaders-plus-informed set under a patient budget to maximize total quality.
Three mechanisms share the pipeline: pay-your-bid greedy, truthful
threshold-payment greedy, and a random baseline.
"""

from .graph import EcId, SocialGraph, activation_value, marginal_contribution
from .mechanisms import (
    PricingTrace,
    TracePoint,
    notbc_ds,
    notbc_li,
    random_select,
    run_notbc,
    run_random,
    run_tbc,
    tbc_ds_allocate,
    tbc_ds_price,
    tbc_li_allocate,
    tbc_li_price,
)
from .model import (
    BidProfile,
    EcProfile,
    Instance,
    Outcome,
    QualityParams,
    QualityWeights,
    ValidationError,
    compute_quality,
    dump_instance,
    load_bids,
    load_instance,
    quality_contribution,
    quality_value,
    truthful_bids,
    validate_instance,
)
from .money import Money, format_money, format_money_fixed, parse_money

__version__ = "0.1.0"

__all__ = [
    "EcId",
    "SocialGraph",
    "activation_value",
    "marginal_contribution",
    "Money",
    "parse_money",
    "format_money",
    "format_money_fixed",
    "QualityParams",
    "QualityWeights",
    "EcProfile",
    "BidProfile",
    "Instance",
    "Outcome",
    "ValidationError",
    "compute_quality",
    "quality_value",
    "quality_contribution",
    "validate_instance",
    "load_instance",
    "dump_instance",
    "load_bids",
    "truthful_bids",
    "notbc_li",
    "notbc_ds",
    "run_notbc",
    "PricingTrace",
    "TracePoint",
    "tbc_li_allocate",
    "tbc_li_price",
    "tbc_ds_allocate",
    "tbc_ds_price",
    "run_tbc",
    "random_select",
    "run_random",
    "__version__",
]
