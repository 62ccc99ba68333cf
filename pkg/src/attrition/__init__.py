"""Attrition-form informative equilibria in finite-type dynamic signaling games."""

from .core import (
    Belief,
    Ordering,
    SeparableModel,
    TypeSpace,
    bliss_action,
    expected_type,
    flow_utility,
    fosd_compare,
)
from .beliefs import BeliefPath, bayes_pool_update, off_path_belief, unravel_beliefs
from .constructor import AttritionCandidate, build_attrition, pooling_action, separating_action
from .verifier import (
    Certificate,
    SmallGame,
    Verdict,
    brute_force_value,
    deviation_value,
    schedule_value,
    verify_candidate,
)
from .apps import (
    BargainingParams,
    LaborParams,
    PriceSignalingParams,
    make_bargaining_model,
    make_labor_model,
    make_price_model,
    z_factor,
)

__version__ = "0.1.0"
