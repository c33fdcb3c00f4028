"""Interactive episode orchestration: simulate, recommend, propose, explain.

A session owns the true environment state, the particle belief, and the log.
All randomness is derived from one seed: replaying the same call sequence
reproduces the session exactly, byte for byte in its export.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass

from .belief import ParticleBelief, belief_marginals, belief_update, initial_belief
from .core import Weighting, reward
from .errors import OutOfOrderError, SessionCompleteError
from .explain import Explanation, generate_explanation, hvac_feature_labels
from .hvac import (
    HvacConfig,
    HvacObservation,
    hvac_features,
    hvac_initial_state,
    hvac_observation_sample,
    hvac_transition_sample,
    check_action,
)
from .planner import QEstimate, ScenarioTree, build_tree, evaluate
from .reconcile import CEParams, ReconcileProblem, ReconcileResult, cross_entropy_reconcile
from .rng import SeededStream

EXPORT_VERSION = 1

# Stream derivation keys; recommend/propose streams depend only on the
# timestep (and propose count), so repeated calls are reproducible.
_KEY_SIM = 1
_KEY_BELIEF = 2
_KEY_PLAN = 3
_KEY_RECONCILE = 4


@dataclass(frozen=True)
class PlannerParams:
    num_scenarios: int = 300
    depth: int = 2
    rollout_depth: int = 5

    def __post_init__(self):
        if self.num_scenarios < 1 or self.depth < 1 or self.rollout_depth < 0:
            raise ValueError("num_scenarios, depth must be >= 1; rollout_depth >= 0")

    def to_json_dict(self) -> dict:
        return {"num_scenarios": self.num_scenarios, "depth": self.depth,
                "rollout_depth": self.rollout_depth}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PlannerParams":
        return cls(**doc)


@dataclass(frozen=True)
class ExplainParams:
    report_threshold: float = 0.05
    percent_grain: int = 5

    def to_json_dict(self) -> dict:
        return {"report_threshold": self.report_threshold,
                "percent_grain": self.percent_grain}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ExplainParams":
        return cls(**doc)


@dataclass(frozen=True)
class SessionConfig:
    """Everything a session needs: domain, planner, optimizer, weighting, seed."""

    hvac: HvacConfig
    planner: PlannerParams
    ce: CEParams
    explain: ExplainParams
    phi_a: tuple[float, ...]
    seed: int = 0
    belief_particles: int = 5000

    def __post_init__(self):
        object.__setattr__(self, "phi_a", tuple(float(v) for v in self.phi_a))
        if len(self.phi_a) != self.hvac.feature_count:
            raise ValueError("phi_a length must equal the domain feature count")
        Weighting(self.phi_a)  # validates non-negativity
        if self.belief_particles < 1:
            raise ValueError("belief_particles must be positive")

    @classmethod
    def default(cls, seed: int = 0) -> "SessionConfig":
        hvac = HvacConfig.default()
        return cls(hvac=hvac, planner=PlannerParams(), ce=CEParams(),
                   explain=ExplainParams(), phi_a=(1.0,) * hvac.feature_count,
                   seed=seed)

    def to_json_dict(self, include_seed: bool = True) -> dict:
        doc = {
            "hvac": self.hvac.to_json_dict(),
            "planner": self.planner.to_json_dict(),
            "ce": self.ce.to_json_dict(),
            "explain": self.explain.to_json_dict(),
            "phi_a": list(self.phi_a),
            "belief_particles": self.belief_particles,
        }
        if include_seed:
            doc["seed"] = self.seed
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SessionConfig":
        hvac = HvacConfig.from_json_dict(doc["hvac"]) if "hvac" in doc else HvacConfig.default()
        return cls(
            hvac=hvac,
            planner=PlannerParams.from_json_dict(doc.get("planner", {})),
            ce=CEParams.from_json_dict(doc.get("ce", {})),
            explain=ExplainParams.from_json_dict(doc.get("explain", {})),
            phi_a=tuple(doc.get("phi_a", (1.0,) * hvac.feature_count)),
            seed=int(doc.get("seed", 0)),
            belief_particles=int(doc.get("belief_particles", 5000)),
        )

    @classmethod
    def load(cls, path) -> "SessionConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass
class StepReport:
    """Everything the UI needs to draw one executed step."""

    t: int
    action: tuple[int, ...]
    observation: HvacObservation
    belief_marginals: dict
    features: tuple[float, ...]
    reward: float
    running_return: float
    penalties: tuple[bool, ...]

    def to_json_dict(self) -> dict:
        return {
            "t": self.t,
            "action": list(self.action),
            "observation": self.observation.to_json_dict(),
            "belief_marginals": self.belief_marginals,
            "features": list(self.features),
            "reward": self.reward,
            "running_return": self.running_return,
            "penalties": list(self.penalties),
        }


class Session:
    """Single-writer state machine for one episode."""

    def __init__(self, config: SessionConfig, session_id: str | None = None):
        self.config = config
        self.id = session_id or uuid.uuid4().hex
        self._master = SeededStream(config.seed)
        self._sim_stream = self._master.split(_KEY_SIM)
        self._belief_stream = self._master.split(_KEY_BELIEF)
        self.true_state = hvac_initial_state(config.hvac, self._sim_stream)
        self.belief: ParticleBelief = initial_belief(
            config.hvac, self.true_state, config.belief_particles)
        self.steps: list[dict] = []
        self.reconciliations: list[dict] = []
        self._running_return = 0.0
        self._cache: tuple[int, ScenarioTree, QEstimate, int] | None = None

    @property
    def timestep(self) -> int:
        return self.true_state.t

    @property
    def terminal(self) -> bool:
        return self.timestep >= self.config.hvac.horizon

    @property
    def has_recommendation(self) -> bool:
        return self._cache is not None and self._cache[0] == self.timestep

    def recommend(self) -> tuple[tuple[int, ...], QEstimate]:
        """Plan at the current belief; cached per timestep so repeated calls
        (and any subsequent propose) reuse the identical tree."""
        if self.terminal:
            raise SessionCompleteError("episode is over; nothing to recommend")
        if not self.has_recommendation:
            stream = self._master.split(_KEY_PLAN).split(self.timestep)
            p = self.config.planner
            tree = build_tree(self.belief, self.config.hvac, p.num_scenarios,
                              p.depth, p.rollout_depth, stream)
            estimate = evaluate(tree, self.config.phi_a)
            self._cache = (self.timestep, tree, estimate, estimate.best_index())
        _, _, estimate, best = self._cache
        return self.config.hvac.action_tuple(best), estimate

    def step(self, action: tuple[int, ...]) -> StepReport:
        """Execute an action: sample the environment, update the belief, log."""
        cfg = self.config.hvac
        action = tuple(int(a) for a in action)
        check_action(cfg, action)
        if self.terminal:
            raise SessionCompleteError(f"no actions past timestep {self.timestep}")
        t = self.timestep
        feats = hvac_features(cfg, self.true_state, action)
        step_reward = reward(feats, self.config.phi_a)
        self._running_return += cfg.discount ** (t - 1) * step_reward
        penalties = tuple(v < 0 for v in feats.values[: cfg.n_locations])
        next_state = hvac_transition_sample(cfg, self.true_state, action, self._sim_stream)
        obs = hvac_observation_sample(cfg, action, next_state, self._sim_stream)
        posterior = belief_update(self.belief, action, obs, cfg, self._belief_stream)
        report = StepReport(
            t=t,
            action=action,
            observation=obs,
            belief_marginals=belief_marginals(posterior),
            features=feats.values,
            reward=step_reward,
            running_return=self._running_return,
            penalties=penalties,
        )
        entry = report.to_json_dict()
        entry["true_state"] = self.true_state.to_json_dict()
        self.steps.append(entry)
        self.true_state = next_state
        self.belief = posterior
        self._cache = None
        return report

    def propose(self, user_action: tuple[int, ...]) -> tuple[ReconcileResult, Explanation]:
        """Reconcile a user-proposed action against the cached recommendation.

        Requires recommend() at the current timestep; never mutates the
        belief, the true state, or the timestep. The caller still decides
        what to execute via step().
        """
        cfg = self.config.hvac
        user_action = tuple(int(a) for a in user_action)
        check_action(cfg, user_action)
        if not self.has_recommendation:
            raise OutOfOrderError("propose requires recommend at the current timestep")
        t, tree, _, best = self._cache
        prior_here = sum(1 for r in self.reconciliations if r["t"] == t)
        stream = self._master.split(_KEY_RECONCILE).split(t).split(prior_here)
        problem = ReconcileProblem.from_tree(
            tree, best, cfg.action_index(user_action), self.config.phi_a,
            w=self.config.ce.w, epsilon=self.config.ce.epsilon,
            penalty_form=self.config.ce.penalty_form)
        result = cross_entropy_reconcile(problem, self.config.ce, stream)
        explanation = generate_explanation(
            self.config.phi_a, result.phi_hat, hvac_feature_labels(cfg),
            report_threshold=self.config.explain.report_threshold,
            percent_grain=self.config.explain.percent_grain)
        entry = {
            "t": t,
            "a_a": list(cfg.action_tuple(best)),
            "a_h": list(user_action),
            "phi_hat": list(result.phi_hat.values),
            "U": result.objective,
            "feasible": result.feasible,
            "l1_distance": result.l1_distance,
            "residual": result.residual,
            "explanation": explanation.to_json_list(),
        }
        self.reconciliations.append(entry)
        return result, explanation

    def export(self, debug: bool = False) -> dict:
        """Serializable session document; true states only under debug."""
        steps = []
        for entry in self.steps:
            copy = dict(entry)
            if not debug:
                copy.pop("true_state", None)
            steps.append(copy)
        return {
            "version": EXPORT_VERSION,
            "config": self.config.to_json_dict(include_seed=False),
            "seed": self.config.seed,
            "steps": steps,
            "reconciliations": [dict(r) for r in self.reconciliations],
        }

    @classmethod
    def from_export(cls, doc: dict) -> "Session":
        """Rebuild a live session by replaying the logged actions.

        Stepping is deterministic given the seed, so the rebuilt state and
        belief match the originals; reconciliation records are carried over
        verbatim rather than re-optimized.
        """
        if doc.get("version") != EXPORT_VERSION:
            raise ValueError(f"unsupported export version {doc.get('version')!r}")
        config = SessionConfig.from_json_dict({**doc["config"], "seed": doc["seed"]})
        session = cls(config)
        for entry in doc["steps"]:
            session.step(tuple(entry["action"]))
        session.reconciliations = [dict(r) for r in doc["reconciliations"]]
        return session


def create_session(config: SessionConfig, session_id: str | None = None) -> Session:
    """New session at timestep 1 with an exact initial belief."""
    return Session(config, session_id=session_id)


def export_json(doc: dict) -> str:
    """Canonical JSON rendering used everywhere a session document is written."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
