"""Repair-dispatch planning with reward-weighting reconciliation."""

from .belief import ParticleBelief, belief_marginals, belief_update, initial_belief
from .core import FeatureVector, PomdpModel, Weighting, reward
from .explain import Explanation, FeatureLabel, generate_explanation, hvac_feature_labels
from .hvac import (
    HvacConfig,
    HvacModel,
    HvacObservation,
    HvacState,
    Status,
    hvac_features,
    hvac_initial_state,
    hvac_observation_prob,
    hvac_observation_sample,
    hvac_transition_sample,
    hvac_transition_support,
    load_default_config,
)
from .planner import QEstimate, ScenarioTree, best_action, build_tree, evaluate, evaluate_batch
from .reconcile import (
    CEParams,
    ReconcileProblem,
    ReconcileResult,
    cross_entropy_reconcile,
    objective_u,
)
from .rng import SeededStream
from .session import (
    ExplainParams,
    PlannerParams,
    Session,
    SessionConfig,
    StepReport,
    create_session,
)

__version__ = "0.1.0"
